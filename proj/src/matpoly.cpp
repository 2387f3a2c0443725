#include "freeholo/matpoly.hpp"

#include <algorithm>

namespace freeholo {

MatPoly::MatPoly(int d, int rows, int cols, Terms terms)
    : d_(d), rows_(rows), cols_(cols), terms_(std::move(terms)) {
  normalize();
}

void MatPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.rows() != rows_ || it->second.cols() != cols_) {
      throw ShapeMismatch("MatPoly: coefficient shape differs from declared shape");
    }
    for (int r : it->first.letters) {
      if (r < 1 || r > d_) throw SchemaError("MatPoly: letter outside 1..d");
    }
    if (mat::max_abs(it->second) < kPurge) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

MatPoly MatPoly::constant(int d, const CMatrix& c) {
  Terms t;
  t.emplace(Word{}, c);
  return MatPoly(d, static_cast<int>(c.rows()), static_cast<int>(c.cols()), std::move(t));
}

int MatPoly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.degree());
}

CMatrix MatPoly::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  if (it == terms_.end()) return CMatrix::Zero(rows_, cols_);
  return it->second;
}

MatPoly matpoly_add(const MatPoly& a, const MatPoly& b) {
  if (a.d() != b.d() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("matpoly_add: shapes differ");
  }
  MatPoly::Terms t = a.terms();
  for (const auto& [w, c] : b.terms()) {
    auto it = t.find(w);
    if (it == t.end()) {
      t.emplace(w, c);
    } else {
      it->second += c;
    }
  }
  return MatPoly(a.d(), a.rows(), a.cols(), std::move(t));
}

MatPoly matpoly_sub(const MatPoly& a, const MatPoly& b) {
  MatPoly::Terms t;
  for (const auto& [w, c] : b.terms()) t.emplace(w, -c);
  return matpoly_add(a, MatPoly(b.d(), b.rows(), b.cols(), std::move(t)));
}

MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b) {
  if (a.d() != b.d() || a.cols() != b.rows()) throw ShapeMismatch("matpoly_mul: shapes differ");
  MatPoly::Terms t;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      Word w = concat(wa, wb);
      CMatrix prod = ca * cb;
      auto it = t.find(w);
      if (it == t.end()) {
        t.emplace(std::move(w), std::move(prod));
      } else {
        it->second += prod;
      }
    }
  }
  return MatPoly(a.d(), a.rows(), b.cols(), std::move(t));
}

MatPoly matpoly_left(const CMatrix& c, const MatPoly& a) {
  if (c.cols() != a.rows()) throw ShapeMismatch("matpoly_left: shapes differ");
  MatPoly::Terms t;
  for (const auto& [w, coeff] : a.terms()) t.emplace(w, c * coeff);
  return MatPoly(a.d(), static_cast<int>(c.rows()), a.cols(), std::move(t));
}

MatPoly matpoly_right(const MatPoly& a, const CMatrix& c) {
  if (a.cols() != c.rows()) throw ShapeMismatch("matpoly_right: shapes differ");
  MatPoly::Terms t;
  for (const auto& [w, coeff] : a.terms()) t.emplace(w, coeff * c);
  return MatPoly(a.d(), a.rows(), static_cast<int>(c.cols()), std::move(t));
}

CMatrix eval_matpoly(const MatPoly& p, const GradedPoint& x) {
  if (p.d() != x.d()) throw ShapeMismatch("eval_matpoly: arity differs");
  const int n = x.n();
  CMatrix out = CMatrix::Zero(n * p.rows(), n * p.cols());
  WordCache cache(x);
  for (const auto& [w, c] : p.terms()) out += mat::kron(cache.value(w), c);
  return out;
}

PolyMatrix to_poly_matrix(const MatPoly& p) {
  std::vector<FreePoly::Terms> cells(static_cast<std::size_t>(p.rows() * p.cols()));
  for (const auto& [w, c] : p.terms()) {
    for (int a = 0; a < p.rows(); ++a) {
      for (int b = 0; b < p.cols(); ++b) {
        if (c(a, b) != Complex{}) cells[static_cast<std::size_t>(a * p.cols() + b)][w] += c(a, b);
      }
    }
  }
  std::vector<FreePoly> entries;
  entries.reserve(cells.size());
  for (auto& cell : cells) entries.emplace_back(p.d(), std::move(cell));
  return PolyMatrix(p.rows(), p.cols(), p.d(), std::move(entries));
}

MatPoly from_poly_matrix(const PolyMatrix& m) {
  MatPoly::Terms t;
  for (const Word& w : m.support()) t.emplace(w, m.word_coefficients(w));
  return MatPoly(m.d(), m.rows(), m.cols(), std::move(t));
}

CMatrix level_outer_to_inner(const CMatrix& m, int n, int k_rows, int k_cols) {
  if (m.rows() != n * k_rows || m.cols() != n * k_cols) {
    throw ShapeMismatch("level_outer_to_inner: shape does not match n and k");
  }
  CMatrix out(m.rows(), m.cols());
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < k_rows; ++i) {
      for (int b = 0; b < n; ++b) {
        for (int j = 0; j < k_cols; ++j) {
          out(i * n + a, j * n + b) = m(a * k_rows + i, b * k_cols + j);
        }
      }
    }
  }
  return out;
}

}  // namespace freeholo
