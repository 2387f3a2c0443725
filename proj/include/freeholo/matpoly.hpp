#pragma once

#include <map>

#include "freeholo/freepoly.hpp"

namespace freeholo {

/// Free polynomial with operator coefficients: sum_w w (x) C_w, every C_w of
/// shape rows x cols. At level n the value sum_w kron(w(x), C_w) acts from
/// C^n (x) C^cols to C^n (x) C^rows with the level as the outer factor.
class MatPoly {
 public:
  using Terms = std::map<Word, CMatrix, GradedLex>;
  static constexpr double kPurge = 1e-15;

  MatPoly() = default;
  MatPoly(int d, int rows, int cols) : d_(d), rows_(rows), cols_(cols) {}
  MatPoly(int d, int rows, int cols, Terms terms);

  static MatPoly constant(int d, const CMatrix& c);

  int d() const { return d_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;
  CMatrix coefficient(const Word& w) const;

 private:
  void normalize();

  int d_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  Terms terms_;
};

MatPoly matpoly_add(const MatPoly& a, const MatPoly& b);
MatPoly matpoly_sub(const MatPoly& a, const MatPoly& b);
/// (w1 (x) P)(w2 (x) Q) = w1 w2 (x) P Q.
MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b);
/// Left/right multiplication by a constant coefficient.
MatPoly matpoly_left(const CMatrix& c, const MatPoly& a);
MatPoly matpoly_right(const MatPoly& a, const CMatrix& c);

/// Level-outer evaluation: sum_w kron(w(x), C_w).
CMatrix eval_matpoly(const MatPoly& p, const GradedPoint& x);

/// Entrywise view: entry (a, b) = sum_w C_w(a, b) w.
PolyMatrix to_poly_matrix(const MatPoly& p);
MatPoly from_poly_matrix(const PolyMatrix& m);

/// Reorders a matrix from level-outer layout (row a*k_rows + i) to the
/// level-inner block layout of eval_poly_matrix (row i*n + a), and likewise
/// for columns.
CMatrix level_outer_to_inner(const CMatrix& m, int n, int k_rows, int k_cols);

}  // namespace freeholo
