#pragma once

#include <functional>
#include <vector>

#include "freeholo/freepoly.hpp"

namespace freeholo {

/// A graded, L(H, K)-valued function on matrix tuples. At level n the value
/// maps C^n (x) C^dim_in to C^n (x) C^dim_out, level as the outer factor.
/// The evaluator throws a MathError (OutsideDomain, SingularityHit, ...)
/// for points outside its domain. Evaluators must be safe to call concurrently.
struct NcFunction {
  std::function<CMatrix(const GradedPoint&)> eval;
  int dim_in = 1;
  int dim_out = 1;

  CMatrix operator()(const GradedPoint& x) const { return eval(x); }
};

NcFunction poly_function(FreePoly p);

GradedPoint point_direct_sum(const GradedPoint& x, const GradedPoint& y);

/// Componentwise s^{-1} x^r s. Throws SingularMatrix.
GradedPoint conjugate(const GradedPoint& x, const CMatrix& s);

/// The 2n-level point [[N, N C - C M], [0, M]] coordinatewise.
GradedPoint upper_triangular_point(const GradedPoint& top, const GradedPoint& bottom,
                                   const CMatrix& c);

/// True when every coordinate is a multiple of the identity (within tol).
bool is_scalar_tuple(const GradedPoint& x, double tol = 1e-12);

enum class Verdict { Inside, Boundary, Outside };

struct Membership {
  Verdict verdict;
  /// 1 - ||delta(x)||.
  double dist;
  double norm;
};

inline constexpr double kDefaultMargin = 1e-9;

/// Inside iff ||delta(x)|| < 1 - margin, Boundary within +-margin of 1.
Membership in_gdelta(const PolyMatrix& delta, const GradedPoint& x, double margin = kDefaultMargin);

const char* to_string(Verdict v);

struct SimilarityWitness {
  std::vector<GradedPoint> blocks;
  CMatrix s;
};

/// Checks x = S^{-1} (+ blocks) S within 1e-8 cond(S) relative to ||x||.
bool envelope_member(const GradedPoint& x, const SimilarityWitness& w);

/// (S^{-1} (x) I_K) (+ f_blocks) (S (x) I_H).
CMatrix extend_function(const std::vector<CMatrix>& f_on_blocks, const SimilarityWitness& w,
                        int dim_h, int dim_k);

/// Directional derivative Df(M)[E], read off as the (1,2) block of
/// f([[M, E], [0, M]]).
CMatrix nc_derivative(const NcFunction& f, const GradedPoint& m, const GradedPoint& e);

struct NcAxiomReport {
  // Deviations scaled by conditioning and magnitude; compared to threshold.
  double direct_sum = 0.0;
  double similarity = 0.0;
  double block_identity = 0.0;
  // Unscaled maxima, for reporting.
  double direct_sum_raw = 0.0;
  double similarity_raw = 0.0;
  double block_identity_raw = 0.0;
  int direct_sum_checks = 0;
  int similarity_checks = 0;
  int block_identity_checks = 0;
  int skipped = 0;
  double threshold = 1e-8;
  bool pass = true;
};

struct NcAxiomOptions {
  double threshold = 1e-8;
  /// Upper bound on direct-sum pairs examined (consecutive pairs first).
  int max_pairs = 64;
};

/// Tests the direct-sum axiom on sample pairs, the similarity axiom for each
/// sample against every same-size similarity, and the upper-triangular block
/// identity using the similarities as intertwiners. Points where f throws a
/// MathError count as outside the domain and are skipped.
NcAxiomReport check_nc_axioms(const NcFunction& f, const std::vector<GradedPoint>& samples,
                              const std::vector<CMatrix>& sims, const NcAxiomOptions& opts = {});

}  // namespace freeholo
