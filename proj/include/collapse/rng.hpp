#ifndef COLLAPSE_RNG_HPP
#define COLLAPSE_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace collapse {

/// Seeded random stream. All randomness in the library flows through this
/// class so that every experiment is a pure function of its master seed.
///
/// child(i) derives an independent stream for trial i; results merged across
/// trials are therefore invariant under parallel scheduling.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1) with 53 random bits, never exactly 0 when asked
  /// (uniform_positive) so it is safe inside logs.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_positive() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Standard normal via the polar form of Box-Muller. No cached state:
  /// one call consumes exactly two engine draws.
  double gauss() {
    const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
    return r * std::cos(2.0 * M_PI * uniform());
  }

  /// Complex number whose real and imaginary parts are independent N(0,1).
  std::complex<double> cgauss() {
    const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
    const double theta = 2.0 * M_PI * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  /// Independent stream for trial `index`, derived from this stream's seed.
  Rng child(std::uint64_t index) const { return Rng(child_seed(index)); }

  std::uint64_t child_seed(std::uint64_t index) const {
    return splitmix(seed_ + 0x9E3779B97F4A7C15ULL * (index + 1));
  }

private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace collapse

#endif
