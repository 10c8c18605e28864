#ifndef COLLAPSE_SERIALIZE_HPP
#define COLLAPSE_SERIALIZE_HPP

#include <string>

#include "collapse/commutant.hpp"
#include "collapse/dilation.hpp"
#include "collapse/states.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace collapse {

using Json = nlohmann::json;

/// {"dims": [r, c], "entries": [[re, im], ...]} flattened row-major.
/// Doubles round-trip exactly.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json density_to_json(const DensityOperator& rho);     ///< {"kind": "density", "matrix": ...}
Json pure_to_json(const PureState& psi);              ///< {"kind": "pure", "vector": ...}
Json observable_to_json(const Observable& obs);       ///< {"kind": "observable", "matrix": ...}

/// Accepts "density" or "pure" wrappers; pure states are promoted to their
/// rank-1 density operator.
DensityOperator state_from_json(const Json& j);
Observable observable_from_json(const Json& j);

/// {"dims": [...], "trials": N, "worst_min_eigenvalue": x, "worst_trace_dev": y,
///  "counterexamples": [{"seed", "dim", "violation"}, ...], "master_seed": s}
Json scan_report_to_json(const ScanReport& report);

/// Unitary as matrix JSON plus {system_dim, pointer_dim, ready_index}.
Json dilation_to_json(const MeasurementDilation& dil);

Json load_json_file(const std::string& path);
void save_file(const std::string& path, const std::string& bytes);

}  // namespace collapse

#endif
