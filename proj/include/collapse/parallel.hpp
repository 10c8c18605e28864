#ifndef COLLAPSE_PARALLEL_HPP
#define COLLAPSE_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace collapse {

/// Worker count: COLLAPSE_LAB_THREADS if set, hardware concurrency otherwise.
inline int thread_budget() {
  if (const char* env = std::getenv("COLLAPSE_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

/// Evaluate fn(i) for i in [0, n), possibly across threads. Results land at
/// their own index, so any later reduction is order-independent and the
/// output never depends on the schedule. Trials must draw randomness only
/// from per-index derived streams.
template <typename T, typename F>
std::vector<T> run_trials(long n, F&& fn) {
  std::vector<T> results(static_cast<std::size_t>(n));
  const int workers = std::min<long>(thread_budget(), n) > 0
                          ? static_cast<int>(std::min<long>(thread_budget(), n))
                          : 1;
  if (workers == 1) {
    for (long i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }

  std::atomic<long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace collapse

#endif
