#pragma once

// JSON forms of module outputs. Tuples serialize as arrays of coordinate
// arrays; doubles are written in shortest round-trip form.

#include <optional>
#include <vector>

#include <json.hpp>

#include "menger/estimators.hpp"
#include "menger/geometry.hpp"
#include "menger/multiscale.hpp"
#include "menger/planes.hpp"
#include "menger/sequences.hpp"

namespace menger {

using Json = nlohmann::ordered_json;

Json vector_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json tuple_json(const Tuple& X);
Tuple tuple_from_json(const Json& j);
Json ball_json(const Ball& B);

Json plane_json(const AffinePlane& L);
Json beta2_json(const Beta2Result& r);

/// {"total", "terms": [{"level", "j", "t", "beta2sq", "mass"}]}
Json flatness_json(const FlatnessReport& r);
FlatnessReport flatness_from_json(const Json& j);

Json decomposition_json(const DecompositionReport& r);

/// {"estimate", "std_error", "n_samples", "exact", "class_breakdown", ...}.
/// class_breakdown is null when no decomposition is supplied.
Json estimate_json(const MCEstimate& e, const std::optional<DecompositionReport>& breakdown = std::nullopt);
MCEstimate estimate_from_json(const Json& j);

Json constants_json(const Constants& c);

/// {"auxiliary": [...], "main": [...]} for a well-scaled sequence.
Json well_scaled_bundle_json(const Tuple& X, const std::vector<Vector>& Y, int k, int d);
/// {"auxiliary": [[level 0], [level 1], ...], "main": [...]} for a rake tree.
Json rake_bundle_json(const Tuple& X, const std::vector<Vector>& Z, int n, int d);

}  // namespace menger
