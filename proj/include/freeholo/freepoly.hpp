#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "freeholo/mat.hpp"

namespace freeholo {

/// A word in the letters 1..d; the empty word is the constant 1.
struct Word {
  std::vector<int> letters;

  std::size_t degree() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  bool operator==(const Word&) const = default;
};

Word concat(const Word& a, const Word& b);

/// Graded-lexicographic order: shorter words first, then letterwise.
struct GradedLex {
  bool operator()(const Word& a, const Word& b) const;
};

/// A d-tuple of n x n complex matrices.
class GradedPoint {
 public:
  GradedPoint() = default;
  /// Throws ShapeMismatch unless every matrix is square of the same size n >= 1.
  explicit GradedPoint(std::vector<CMatrix> mats);

  /// The scalar point (z_1, ..., z_d) at level 1.
  static GradedPoint scalar(const std::vector<Complex>& z);

  int d() const { return static_cast<int>(mats_.size()); }
  int n() const { return n_; }
  const CMatrix& operator[](int r) const { return mats_[static_cast<std::size_t>(r)]; }
  const std::vector<CMatrix>& mats() const { return mats_; }

 private:
  std::vector<CMatrix> mats_;
  int n_ = 0;
};

/// Finite linear combination of words in d noncommuting letters.
/// Terms are stored in graded-lex order; coefficients with |c| < 1e-15 are dropped.
class FreePoly {
 public:
  using Terms = std::map<Word, Complex, GradedLex>;
  static constexpr double kPurge = 1e-15;

  FreePoly() = default;
  explicit FreePoly(int d) : d_(d) {}
  FreePoly(int d, Terms terms);

  static FreePoly constant(int d, Complex c);
  /// The letter x^r, 1-based.
  static FreePoly variable(int d, int r);
  static FreePoly monomial(int d, Word w, Complex c = 1.0);

  int d() const { return d_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Highest word length; -1 for the zero polynomial.
  int degree() const;
  /// Lowest word length; -1 for the zero polynomial.
  int min_degree() const;
  Complex coefficient(const Word& w) const;

  bool operator==(const FreePoly& other) const;

 private:
  void normalize();

  int d_ = 0;
  Terms terms_;
};

FreePoly poly_add(const FreePoly& p, const FreePoly& q);
FreePoly poly_sub(const FreePoly& p, const FreePoly& q);
FreePoly poly_mul(const FreePoly& p, const FreePoly& q);
FreePoly poly_scale(Complex c, const FreePoly& p);

/// Affine substitution x^r -> shift[r] + sum_s coeffs(r, s) x'^s into a
/// polynomial in coeffs.cols() new letters.
FreePoly poly_compose_linear(const FreePoly& p, const CMatrix& coeffs, const CVector& shift);

std::string to_string(const FreePoly& p);

/// Left-to-right product of the named matrices; I_n for the empty word.
CMatrix eval_word(const Word& w, const GradedPoint& x);
CMatrix eval_poly(const FreePoly& p, const GradedPoint& x);

/// Caches word values by prefix so shared prefixes are multiplied once.
/// Not thread-safe; one instance per evaluation thread.
class WordCache {
 public:
  explicit WordCache(const GradedPoint& x) : x_(x) {}
  const CMatrix& value(const Word& w);

 private:
  const GradedPoint& x_;
  std::map<Word, CMatrix, GradedLex> memo_;
};

/// An I x J matrix of free polynomials over a shared d.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  /// Entries row-major; all must share d.
  PolyMatrix(int rows, int cols, int d, std::vector<FreePoly> entries);

  static PolyMatrix scalar(const FreePoly& p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int d() const { return d_; }
  const FreePoly& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * cols_ + j)];
  }
  const std::vector<FreePoly>& entries() const { return entries_; }
  int degree() const;
  int min_degree() const;

  /// Scalar coefficient matrix (rows x cols) of the word w.
  CMatrix word_coefficients(const Word& w) const;
  /// Every word carrying a nonzero coefficient in some entry, graded-lex order.
  std::vector<Word> support() const;

  bool operator==(const PolyMatrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int d_ = 0;
  std::vector<FreePoly> entries_;
};

/// (I n) x (J n) block matrix; block (i, j) is entry (i, j) evaluated at x.
CMatrix eval_poly_matrix(const PolyMatrix& delta, const GradedPoint& x);

/// Block-diagonal delta1 (+) delta2.
PolyMatrix delta_direct_sum(const PolyMatrix& a, const PolyMatrix& b);

/// delta scaled by a real factor (t delta in K_{t delta}).
PolyMatrix delta_scale(const PolyMatrix& delta, Complex c);

/// delta with `extra` zero columns appended.
PolyMatrix delta_pad_columns(const PolyMatrix& delta, int extra);

/// delta with trailing all-zero columns removed.
PolyMatrix delta_strip_zero_columns(const PolyMatrix& delta);

namespace deltas {

/// 1 x 1 delta = [x^r].
PolyMatrix variable(int d, int r);
/// Column ((x^r - alpha^r) / eps)_r; G_delta at level 1 is the open Euclidean ball.
PolyMatrix ball(const std::vector<Complex>& center, double eps);
/// Row (x^1, ..., x^d); G_delta is the row contraction ball.
PolyMatrix row_ball(int d);
/// diag(x^1, ..., x^d); G_delta is the free polydisk.
PolyMatrix polydisk(int d);
/// 1 - (x^1 x^2 - x^2 x^1)^2 in two letters.
PolyMatrix commutator();

}  // namespace deltas

}  // namespace freeholo
