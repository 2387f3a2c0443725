#pragma once

#include <vector>

#include "freeholo/realize.hpp"

namespace freeholo {

/// Sampled delta-model. At a level-n point:
///   psi: (n K1) x (n H), phi: (n K2) x (n H), u: (n J M) x (n H),
/// with the level as the outer tensor factor and u indexed (a J + j) M + m.
struct ModelSampleSet {
  PolyMatrix delta;
  int dim_h = 1;
  int dim_k1 = 1;
  int dim_k2 = 1;
  int mult = 0;
  std::vector<GradedPoint> points;
  std::vector<CMatrix> psi;
  std::vector<CMatrix> phi;
  std::vector<CMatrix> u;

  /// Shape checks (ShapeMismatch) and domain checks (OutsideDomain).
  void validate() const;
};

/// Max over same-level pairs (x, y), x = y included, of
///   || psi(y)* psi(x) - phi(y)* phi(x) - u(y)* [1 - delta(y)* delta(x)] u(x) ||
/// with delta(x) acting on the multiplicity space as in Realization.
double model_residual(const ModelSampleSet& s);

/// phi = Omega psi and u = v psi from the realization's state map; delta
/// comes from the realization.
ModelSampleSet model_from_realization(const Realization& r, const std::vector<GradedPoint>& points,
                                      const std::vector<CMatrix>& psi, int dim_h);

/// Same with psi = identity (H = K1).
ModelSampleSet model_from_realization(const Realization& r, const std::vector<GradedPoint>& points);

/// Smallest eigenvalue over points of psi(x)* psi(x) - phi(x)* phi(x).
double diagonal_positivity(const ModelSampleSet& s);

/// Builds u for level-1 points and a 1 x 1 delta by factoring the Pick
/// matrix Lambda(y, x) = [psi(y)* psi(x) - phi(y)* phi(x)] / (1 - conj(delta(y)) delta(x)).
/// The multiplicity is the numerical rank (eigenvalues above 1e-12 of the
/// largest). Throws BelowFloor if Lambda has an eigenvalue below
/// -1e-9 max(1, ||Lambda||).
ModelSampleSet scalar_pick_model(const PolyMatrix& delta, const std::vector<GradedPoint>& points,
                                 const std::vector<CMatrix>& psi, const std::vector<CMatrix>& phi);

}  // namespace freeholo
