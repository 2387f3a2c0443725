#include "freeholo/json_io.hpp"

#include <fstream>
#include <sstream>

namespace freeholo::json_io {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw SchemaError(std::string("expected an object with field '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + name + "'");
  return *it;
}

int int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

const Json& array_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw SchemaError(std::string("field '") + name + "' must be an array");
  return v;
}

std::vector<CMatrix> matrices_from(const Json& arr) {
  std::vector<CMatrix> out;
  for (const auto& m : arr) out.push_back(matrix_from_json(m));
  return out;
}

Json matrices_to(const std::vector<CMatrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

}  // namespace

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    for (long k = 0; k < m.cols(); ++k) data.push_back(complex_to_json(m(i, k)));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

CMatrix matrix_from_json(const Json& j) {
  const int rows = int_field(j, "rows");
  const int cols = int_field(j, "cols");
  if (rows < 0 || cols < 0) throw SchemaError("matrix dimensions must be nonnegative");
  const Json& data = array_field(j, "data");
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw SchemaError("matrix data length " + std::to_string(data.size()) + " differs from rows*cols");
  }
  CMatrix m(rows, cols);
  std::size_t idx = 0;
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[idx++]);
  }
  if (!mat::all_finite(m)) throw SchemaError("matrix has non-finite entries");
  return m;
}

Json poly_to_json(const FreePoly& p) {
  Json terms = Json::array();
  for (const auto& [w, c] : p.terms()) {
    Json t;
    t["coeff"] = complex_to_json(c);
    t["word"] = w.letters;
    terms.push_back(std::move(t));
  }
  Json j;
  j["d"] = p.d();
  j["terms"] = std::move(terms);
  return j;
}

FreePoly poly_from_json(const Json& j) {
  const int d = int_field(j, "d");
  if (d < 1) throw SchemaError("polynomial arity must be >= 1");
  FreePoly::Terms terms;
  for (const auto& t : array_field(j, "terms")) {
    Word w;
    for (const auto& l : array_field(t, "word")) {
      if (!l.is_number_integer()) throw SchemaError("word letters must be integers");
      w.letters.push_back(l.get<int>());
    }
    terms[w] += complex_from_json(field(t, "coeff"));
  }
  return FreePoly(d, std::move(terms));
}

Json poly_matrix_to_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(poly_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["d"] = m.d();
  j["entries"] = std::move(rows);
  return j;
}

PolyMatrix poly_matrix_from_json(const Json& j) {
  const int rows = int_field(j, "rows");
  const int cols = int_field(j, "cols");
  const Json& entries = array_field(j, "entries");
  if (rows < 1 || cols < 1 || entries.size() != static_cast<std::size_t>(rows)) {
    throw SchemaError("poly matrix: entries do not match rows");
  }
  std::vector<FreePoly> flat;
  for (const auto& row : entries) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
      throw SchemaError("poly matrix: row length differs from cols");
    }
    for (const auto& e : row) flat.push_back(poly_from_json(e));
  }
  const int d = j.contains("d") ? int_field(j, "d") : flat.front().d();
  return PolyMatrix(rows, cols, d, std::move(flat));
}

Json matpoly_to_json(const MatPoly& p) {
  Json terms = Json::array();
  for (const auto& [w, c] : p.terms()) {
    Json t;
    t["word"] = w.letters;
    t["coeff"] = matrix_to_json(c);
    terms.push_back(std::move(t));
  }
  Json j;
  j["d"] = p.d();
  j["rows"] = p.rows();
  j["cols"] = p.cols();
  j["terms"] = std::move(terms);
  return j;
}

Json point_to_json(const GradedPoint& x) {
  Json j;
  j["d"] = x.d();
  j["n"] = x.n();
  j["mats"] = matrices_to(x.mats());
  return j;
}

GradedPoint point_from_json(const Json& j) {
  const int d = int_field(j, "d");
  const int n = int_field(j, "n");
  std::vector<CMatrix> mats = matrices_from(array_field(j, "mats"));
  if (static_cast<int>(mats.size()) != d) throw SchemaError("point: mats count differs from d");
  GradedPoint x(std::move(mats));
  if (x.n() != n) throw SchemaError("point: matrix size differs from n");
  return x;
}

std::vector<GradedPoint> points_from_json(const Json& j) {
  const Json& arr = j.is_object() ? array_field(j, "points") : j;
  if (!arr.is_array()) throw SchemaError("expected an array of points");
  std::vector<GradedPoint> out;
  for (const auto& p : arr) out.push_back(point_from_json(p));
  return out;
}

Json points_to_json(const std::vector<GradedPoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(point_to_json(p));
  return arr;
}

Json realization_to_json(const Realization& r) {
  Json j;
  j["delta"] = poly_matrix_to_json(r.delta());
  j["dimK1"] = r.dim_k1();
  j["dimK2"] = r.dim_k2();
  j["mult"] = r.mult();
  j["J1"] = matrix_to_json(r.j1());
  return j;
}

Realization realization_from_json(const Json& j) {
  return Realization(poly_matrix_from_json(field(j, "delta")), int_field(j, "dimK1"),
                     int_field(j, "dimK2"), int_field(j, "mult"), matrix_from_json(field(j, "J1")));
}

Json model_to_json(const ModelSampleSet& s) {
  Json j;
  j["delta"] = poly_matrix_to_json(s.delta);
  j["dimH"] = s.dim_h;
  j["dimK1"] = s.dim_k1;
  j["dimK2"] = s.dim_k2;
  j["mult"] = s.mult;
  j["points"] = points_to_json(s.points);
  j["psi"] = matrices_to(s.psi);
  j["phi"] = matrices_to(s.phi);
  j["u"] = matrices_to(s.u);
  return j;
}

ModelSampleSet model_from_json(const Json& j) {
  ModelSampleSet s;
  s.delta = poly_matrix_from_json(field(j, "delta"));
  s.dim_h = int_field(j, "dimH");
  s.dim_k1 = int_field(j, "dimK1");
  s.dim_k2 = int_field(j, "dimK2");
  s.mult = int_field(j, "mult");
  s.points = points_from_json(array_field(j, "points"));
  s.psi = matrices_from(array_field(j, "psi"));
  s.phi = matrices_from(array_field(j, "phi"));
  s.u = matrices_from(array_field(j, "u"));
  s.validate();
  return s;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace freeholo::json_io
