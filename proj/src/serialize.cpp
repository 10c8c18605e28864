#include "collapse/serialize.hpp"

#include <fstream>

namespace collapse {

Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
  return Json{{"dims", {m.rows(), m.cols()}}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("entries"))
    throw IoError("matrix JSON must have \"dims\" and \"entries\"");
  const Json& dims = j["dims"];
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
      !dims[1].is_number_integer())
    throw IoError("matrix JSON: \"dims\" must be two integers");
  const Eigen::Index rows = dims[0].get<Eigen::Index>();
  const Eigen::Index cols = dims[1].get<Eigen::Index>();
  if (rows <= 0 || cols <= 0) throw IoError("matrix JSON: dims must be positive");
  const Json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols))
    throw IoError("matrix JSON: expected " + std::to_string(rows * cols) + " entries");
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++idx) {
      const Json& e = entries[idx];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw IoError("matrix JSON: entry " + std::to_string(idx) + " must be [re, im]");
      m(i, j2) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  if (!all_finite(m)) throw ValidationError("matrix JSON: non-finite entries");
  return m;
}

Json density_to_json(const DensityOperator& rho) {
  return Json{{"kind", "density"}, {"matrix", matrix_to_json(rho.matrix())}};
}

Json pure_to_json(const PureState& psi) {
  return Json{{"kind", "pure"}, {"vector", matrix_to_json(psi.vector())}};
}

Json observable_to_json(const Observable& obs) {
  return Json{{"kind", "observable"}, {"matrix", matrix_to_json(obs.matrix())}};
}

DensityOperator state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw IoError("state JSON must have a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "density") {
    if (!j.contains("matrix")) throw IoError("density JSON must have a \"matrix\"");
    return DensityOperator(matrix_from_json(j["matrix"]));
  }
  if (kind == "pure") {
    if (!j.contains("vector")) throw IoError("pure-state JSON must have a \"vector\"");
    const Matrix column = matrix_from_json(j["vector"]);
    if (column.cols() != 1) throw IoError("pure-state JSON: vector must have dims [n, 1]");
    return DensityOperator(PureState(column.col(0)));
  }
  throw IoError("state JSON: unknown kind \"" + kind + "\"");
}

Observable observable_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || j["kind"] != "observable")
    throw IoError("observable JSON must have kind \"observable\"");
  if (!j.contains("matrix")) throw IoError("observable JSON must have a \"matrix\"");
  return Observable(matrix_from_json(j["matrix"]));
}

Json scan_report_to_json(const ScanReport& report) {
  Json counterexamples = Json::array();
  for (const ScanCounterexample& c : report.counterexamples)
    counterexamples.push_back(Json{{"seed", c.seed}, {"dim", c.dim}, {"violation", c.violation}});
  return Json{{"dims", report.dims},
              {"trials", report.trials},
              {"worst_min_eigenvalue", report.worst_min_eigenvalue},
              {"worst_trace_dev", report.worst_trace_dev},
              {"counterexamples", std::move(counterexamples)},
              {"master_seed", report.master_seed}};
}

Json dilation_to_json(const MeasurementDilation& dil) {
  return Json{{"kind", "dilation"},
              {"system_dim", dil.system_dim()},
              {"pointer_dim", dil.pointer_dim()},
              {"ready_index", dil.ready_index()},
              {"unitary", matrix_to_json(dil.unitary())}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw IoError("parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << bytes;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace collapse
