#include "freeholo/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace freeholo {

CoverChoice select_covering_delta(const std::vector<GradedPoint>& sample,
                                  const std::vector<PolyMatrix>& candidates) {
  if (candidates.empty()) throw NoCover(std::numeric_limits<double>::infinity());
  CoverChoice out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    double r = 0.0;
    for (const auto& x : sample) r = std::max(r, mat::op_norm(eval_poly_matrix(candidates[j], x)));
    out.radii.push_back(r);
    if (r < best) {
      best = r;
      out.index = static_cast<int>(j);
    }
  }
  if (!(best < 1.0)) throw NoCover(best);
  out.radius = best;
  out.t = best < 1e-12 ? 1e12 : 0.5 * (1.0 + 1.0 / best);
  return out;
}

std::vector<GradedPoint> close_under_direct_sums(const std::vector<GradedPoint>& sample,
                                                 int level_cap, std::size_t max_points) {
  std::vector<GradedPoint> out;
  for (const auto& x : sample) {
    if (x.n() <= level_cap && out.size() < max_points) out.push_back(x);
  }
  const std::size_t base = out.size();
  for (std::size_t i = 0; i < base; ++i) {
    for (std::size_t j = i; j < base; ++j) {
      if (out.size() >= max_points) return out;
      if (out[i].n() + out[j].n() <= level_cap) out.push_back(point_direct_sum(out[i], out[j]));
    }
  }
  return out;
}

MatPoly expand_polynomial(const Realization& r, int k, std::size_t term_cap) {
  if (k < 0) throw SchemaError("expand_polynomial: K must be nonnegative");
  const int d = r.delta().d();
  MatPoly sum = MatPoly::constant(d, r.a());
  if (r.internal_out() == 0) return sum;
  const MatPoly& dhat = r.promoted();
  // w_k = Delta (D Delta)^k C = (Delta D)^k Delta C.
  MatPoly w = matpoly_mul(dhat, MatPoly::constant(d, r.c()));
  const CMatrix b = r.b();
  for (int j = 0; j <= k; ++j) {
    if (w.term_count() > term_cap) {
      throw TermBlowup("expand_polynomial: " + std::to_string(w.term_count()) + " terms exceed the cap");
    }
    sum = matpoly_add(sum, matpoly_left(b, w));
    if (j == k || w.term_count() == 0) break;
    w = matpoly_mul(dhat, matpoly_left(r.d(), w));
  }
  return sum;
}

double certify_error(int k, double t) {
  if (!(t > 1.0)) throw SchemaError("certify_error: t must exceed 1");
  const double q = 1.0 / t;
  return std::pow(q, k + 2) / (1.0 - q);
}

int choose_truncation(double tol, double t, int max_k) {
  if (!(tol > 0.0)) throw SchemaError("choose_truncation: tol must be positive");
  for (int k = 0; k <= max_k; ++k) {
    if (certify_error(k, t) <= tol) return k;
  }
  throw TermBlowup("choose_truncation: no K up to the cap reaches the tolerance");
}

DictionaryHull::DictionaryHull(const std::vector<GradedPoint>& sample,
                               const std::vector<PolyMatrix>& dictionary, double margin)
    : dictionary_(dictionary), margin_(margin) {
  for (std::size_t j = 0; j < dictionary_.size(); ++j) {
    bool ok = true;
    for (const auto& x : sample) {
      if (mat::op_norm(eval_poly_matrix(dictionary_[j], x)) > 1.0 + margin_) {
        ok = false;
        break;
      }
    }
    if (ok) active_.push_back(static_cast<int>(j));
  }
}

bool DictionaryHull::contains(const GradedPoint& x) const {
  for (int j : active_) {
    if (mat::op_norm(eval_poly_matrix(dictionary_[static_cast<std::size_t>(j)], x)) > 1.0 + margin_) {
      return false;
    }
  }
  return true;
}

}  // namespace freeholo
