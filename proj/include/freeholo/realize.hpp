#pragma once

#include "freeholo/matpoly.hpp"
#include "freeholo/ncpoint.hpp"
#include "freeholo/sampling.hpp"

namespace freeholo {

/// Free delta-realization with finite internal multiplicity M.
///
/// delta is I x J. The colligation J1 = [[A, B], [C, D]] maps
/// C^K1 (+) (C^I (x) C^M) to C^K2 (+) (C^J (x) C^M), so
///   A: K2 x K1,  B: K2 x (I M),  C: (J M) x K1,  D: (J M) x (I M).
/// At level n every block acts as I_n (x) block, with the level as the outer
/// tensor factor. The internal index is j*M + m; delta(x) acts on
/// C^n (x) C^J (x) C^M as sum_w kron(w(x), kron(delta_w, I_M)).
///
/// The value is
///   Omega(x) = A + B delta(x) [1 - D delta(x)]^{-1} C.
class Realization {
 public:
  static constexpr double kIsometryTol = 1e-8;

  Realization() = default;
  /// Throws ShapeMismatch for inconsistent shapes and NotIsometric when
  /// isometry_defect(J1) > 1e-8.
  Realization(PolyMatrix delta, int dim_k1, int dim_k2, int mult, CMatrix j1);

  const PolyMatrix& delta() const { return delta_; }
  int dim_k1() const { return k1_; }
  int dim_k2() const { return k2_; }
  int mult() const { return mult_; }
  const CMatrix& j1() const { return j1_; }
  double defect() const { return defect_; }

  /// I M and J M: the internal spaces delta(x) maps from and to.
  int internal_in() const { return delta_.cols() * mult_; }
  int internal_out() const { return delta_.rows() * mult_; }

  CMatrix a() const { return j1_.topLeftCorner(k2_, k1_); }
  CMatrix b() const { return j1_.topRightCorner(k2_, internal_out()); }
  CMatrix c() const { return j1_.bottomLeftCorner(internal_in(), k1_); }
  CMatrix d() const { return j1_.bottomRightCorner(internal_in(), internal_out()); }

  /// delta (x) I_M as an operator-coefficient polynomial.
  const MatPoly& promoted() const { return promoted_; }

 private:
  PolyMatrix delta_;
  int k1_ = 0;
  int k2_ = 0;
  int mult_ = 0;
  CMatrix j1_;
  double defect_ = 0.0;
  MatPoly promoted_;
};

/// delta (x) I_M, coefficient of w being kron(delta_w, I_M).
MatPoly promote_delta(const PolyMatrix& delta, int mult);

CMatrix eval_direct(const Realization& r, const GradedPoint& x);

/// State map v(x) = [1 - D delta(x)]^{-1} C.
CMatrix eval_state(const Realization& r, const GradedPoint& x);

/// Omega as an NcFunction with dim_in = K1, dim_out = K2.
NcFunction realization_function(const Realization& r);

struct NeumannResult {
  CMatrix value;
  int terms = 0;  // K: highest k included
  double bound = 0.0;
  double tail_bound = 0.0;
};

/// Partial sum A + sum_{k=0}^{K} B delta (D delta)^k C with the smallest K
/// for which ||delta(x)||^{K+2} / (1 - ||delta(x)||) <= tol. The returned
/// bound adds a rounding allowance to that tail bound. Throws OutsideDomain
/// unless ||delta(x)|| < 1 - 1e-9, TermBlowup past max_terms.
NeumannResult eval_neumann(const Realization& r, const GradedPoint& x, double tol,
                           int max_terms = 100000);

/// Smallest K with r0^{K+2} / (1 - r0) <= tol, for 0 <= r0 < 1.
int neumann_terms(double r0, double tol);

namespace realizations {

/// A=0, B=1, C=1, D=0 with delta = x^r: Omega(x) = x^r.
Realization shift(int d = 1, int r = 1);

/// J1 = [[a, s], [s, -conj(a)]], s = sqrt(1 - |a|^2), delta = x:
/// Omega(x) = (a + x)(1 + conj(a) x)^{-1}.
Realization mobius(Complex a);

/// Haar-random isometric colligation; needs K2 + J M >= K1 + I M.
Realization random(const PolyMatrix& delta, int dim_k1, int dim_k2, int mult, sampling::Rng& rng);

}  // namespace realizations

}  // namespace freeholo
