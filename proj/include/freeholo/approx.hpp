#pragma once

#include <vector>

#include "freeholo/realize.hpp"

namespace freeholo {

struct CoverChoice {
  /// 0-based index of the first candidate attaining the minimum.
  int index = 0;
  /// max over E of ||delta_index(M)||.
  double radius = 0.0;
  /// Midpoint of (1, 1/radius).
  double t = 1.0;
  std::vector<double> radii;
};

/// Throws NoCover when every candidate has radius >= 1.
CoverChoice select_covering_delta(const std::vector<GradedPoint>& sample,
                                  const std::vector<PolyMatrix>& candidates);

/// Adds pairwise direct sums x (+) y of the original samples whose level is
/// at most level_cap, up to max_points points in total. ||delta(x (+) y)||
/// is the larger of the two norms, so the cover radius is unchanged.
std::vector<GradedPoint> close_under_direct_sums(const std::vector<GradedPoint>& sample,
                                                 int level_cap, std::size_t max_points = 4096);

/// A + sum_{k=0}^{K} B Delta (D Delta)^k C as a K2 x K1 matrix-coefficient
/// polynomial, where Delta = delta (x) I_M. Throws TermBlowup when an
/// intermediate polynomial holds more than term_cap words.
MatPoly expand_polynomial(const Realization& r, int k, std::size_t term_cap = 1000000);

/// (1/t)^{K+2} / (1 - 1/t): sup of ||Omega - expansion|| over ||delta(x)|| <= 1/t.
double certify_error(int k, double t);

/// Smallest K with certify_error(K, t) <= tol.
int choose_truncation(double tol, double t, int max_k = 100000);

/// {x : ||delta(x)|| <= 1 for every dictionary element that is <= 1 on E}.
class DictionaryHull {
 public:
  DictionaryHull(const std::vector<GradedPoint>& sample, const std::vector<PolyMatrix>& dictionary,
                 double margin = kDefaultMargin);

  bool contains(const GradedPoint& x) const;
  /// Indices of the dictionary elements that contain the sample.
  const std::vector<int>& active() const { return active_; }

 private:
  std::vector<PolyMatrix> dictionary_;
  std::vector<int> active_;
  double margin_;
};

}  // namespace freeholo
