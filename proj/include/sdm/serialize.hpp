#pragma once

#include "sdm/spacetime.hpp"

#include <json.hpp>

namespace sdm {

/// Matrix layout: {"rows": r, "cols": c, "data": [re, im, re, im, ...]} with
/// entries in row-major order.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpacetimeDensityMatrix& t);
SpacetimeDensityMatrix spacetime_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundReport& r);

}  // namespace sdm
