#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "freeholo/matpoly.hpp"
#include "freeholo/model.hpp"
#include "freeholo/realize.hpp"

namespace freeholo::json_io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "freeholo/1";
/// Tensor layout tag written into every report.
inline constexpr const char* kConvention = "level-outer;internal=(j*M+m)";

// Readers throw SchemaError on missing fields, wrong types or inconsistent
// shapes.

Json complex_to_json(Complex c);
Complex complex_from_json(const Json& j);

/// {"rows", "cols", "data": [[re, im], ...]} row-major.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// {"d", "terms": [{"coeff": [re, im], "word": [1-based letters]}]}
Json poly_to_json(const FreePoly& p);
FreePoly poly_from_json(const Json& j);

/// {"rows", "cols", "entries": [[poly, ...], ...]}
Json poly_matrix_to_json(const PolyMatrix& m);
PolyMatrix poly_matrix_from_json(const Json& j);

/// {"d", "rows", "cols", "terms": [{"word": [...], "coeff": CMatrix}]}
Json matpoly_to_json(const MatPoly& p);

/// {"d", "n", "mats": [CMatrix, ...]}
Json point_to_json(const GradedPoint& x);
GradedPoint point_from_json(const Json& j);

/// Accepts an array of points or {"points": [...]}.
std::vector<GradedPoint> points_from_json(const Json& j);
Json points_to_json(const std::vector<GradedPoint>& pts);

/// {"delta", "dimK1", "dimK2", "mult", "J1"}
Json realization_to_json(const Realization& r);
Realization realization_from_json(const Json& j);

/// {"delta", "dimH", "dimK1", "dimK2", "mult", "points", "psi", "phi", "u"}
Json model_to_json(const ModelSampleSet& s);
ModelSampleSet model_from_json(const Json& j);

Json read_file(const std::string& path);

}  // namespace freeholo::json_io
