#include "freeholo/lurking.hpp"

#include <algorithm>
#include <cmath>

namespace freeholo {

namespace {

// Re-indexes (a J + j) M + m to (a J + j) M2 + m, zero elsewhere; the J
// factor may also grow by `sinks` zero slots per level block.
CMatrix pad_multiplicity(const CMatrix& u, int n, int j, int m, int j2, int m2) {
  CMatrix out = CMatrix::Zero(static_cast<long>(n) * j2 * m2, u.cols());
  for (int a = 0; a < n; ++a) {
    for (int jj = 0; jj < j; ++jj) {
      for (int mm = 0; mm < m; ++mm) {
        out.row((static_cast<long>(a) * j2 + jj) * m2 + mm) = u.row((static_cast<long>(a) * j + jj) * m + mm);
      }
    }
  }
  return out;
}

struct Padding {
  int mult;
  int sinks;
};

Padding choose_padding(int k1, int k2, int rows_i, int cols_j, int mult) {
  auto fits = [&](int m, int s) { return k2 + (cols_j + s) * m >= k1 + rows_i * m; };
  if (fits(mult, 0)) return {mult, 0};
  if (cols_j > rows_i) {
    int m = mult;
    while (!fits(m, 0)) ++m;
    return {m, 0};
  }
  const int m = std::max(mult, 1);
  int s = 0;
  while (!fits(m, s)) ++s;
  return {m, s};
}

double residual_at(const Realization& r, const GradedPoint& x, const CMatrix& psi,
                   const CMatrix& phi) {
  return mat::op_norm(eval_direct(r, x) * psi - phi);
}

}  // namespace

FitReport fit_lurking_isometry(const ModelSampleSet& s, const FitOptions& opts) {
  s.validate();
  const int count = static_cast<int>(s.points.size());
  std::vector<int> fit_idx;
  std::vector<int> hold_idx;
  for (int t = 0; t < count; ++t) {
    if (opts.holdout && t % 5 == 4) {
      hold_idx.push_back(t);
    } else {
      fit_idx.push_back(t);
    }
  }

  const int k1 = s.dim_k1;
  const int k2 = s.dim_k2;
  const int di = s.delta.rows();
  const int dj = s.delta.cols();
  const Padding pad = choose_padding(k1, k2, di, dj, s.mult);
  const int m2 = pad.mult;
  const int j2 = dj + pad.sinks;
  const int dim_in = k1 + di * m2;
  const int dim_out = k2 + j2 * m2;
  if (dim_in > opts.dim_cap || dim_out > opts.dim_cap) {
    throw RankOverflow("fit: colligation dimension " + std::to_string(std::max(dim_in, dim_out)) +
                       " exceeds cap " + std::to_string(opts.dim_cap));
  }
  const PolyMatrix delta2 = pad.sinks > 0 ? delta_pad_columns(s.delta, pad.sinks) : s.delta;
  const MatPoly dhat = promote_delta(delta2, m2);

  long total = 0;
  for (int t : fit_idx) total += static_cast<long>(s.points[t].n()) * s.psi[t].cols();
  CMatrix p(dim_in, total);
  CMatrix q(dim_out, total);
  long col = 0;
  for (int t : fit_idx) {
    const GradedPoint& x = s.points[t];
    const int n = x.n();
    const CMatrix u = pad_multiplicity(s.u[t], n, dj, s.mult, j2, m2);
    const CMatrix du = eval_matpoly(dhat, x) * u;
    const long w = s.psi[t].cols();
    for (int a = 0; a < n; ++a) {
      p.block(0, col, k1, w) = s.psi[t].middleRows(static_cast<long>(a) * k1, k1);
      p.block(k1, col, static_cast<long>(di) * m2, w) = du.middleRows(static_cast<long>(a) * di * m2, di * m2);
      q.block(0, col, k2, w) = s.phi[t].middleRows(static_cast<long>(a) * k2, k2);
      q.block(k2, col, static_cast<long>(j2) * m2, w) = u.middleRows(static_cast<long>(a) * j2 * m2, j2 * m2);
      col += w;
    }
  }

  FitReport rep;
  rep.data_mult = s.mult;
  rep.mult = m2;
  rep.sink_columns = pad.sinks;
  rep.fit_points = static_cast<int>(fit_idx.size());
  rep.holdout_points = static_cast<int>(hold_idx.size());

  const CMatrix gp = p.adjoint() * p;
  const CMatrix gq = q.adjoint() * q;
  const double scale = std::max(mat::max_abs(gp), mat::max_abs(gq));
  rep.gram_deviation = mat::max_abs(gp - gq);
  if (rep.gram_deviation > opts.gram_tol * std::max(scale, 1e-300)) {
    throw GramMismatch(rep.gram_deviation);
  }

  CMatrix j1;
  if (total == 0 || scale == 0.0) {
    j1 = mat::complete_to_isometry(CMatrix(dim_out, 0), static_cast<std::size_t>(dim_in));
  } else {
    Eigen::JacobiSVD<CMatrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv(rank) >= opts.rank_tol * sv(0)) ++rank;
    rep.rank = rank;
    const CMatrix w = q * svd.matrixV().leftCols(rank) *
                      sv.head(rank).cwiseInverse().asDiagonal();
    // Nearest matrix with orthonormal columns.
    Eigen::JacobiSVD<CMatrix> polar(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CMatrix wo = polar.matrixU() * polar.matrixV().adjoint();
    const CMatrix z = mat::complete_to_isometry(wo, static_cast<std::size_t>(dim_in));
    j1 = z * svd.matrixU().adjoint();
  }
  rep.realization = Realization(delta2, k1, k2, m2, j1);

  for (int t : fit_idx) {
    rep.fit_residual = std::max(rep.fit_residual, residual_at(rep.realization, s.points[t], s.psi[t], s.phi[t]));
  }
  for (int t : hold_idx) {
    rep.holdout_residual =
        std::max(rep.holdout_residual, residual_at(rep.realization, s.points[t], s.psi[t], s.phi[t]));
  }
  return rep;
}

CMatrix stack_column(const std::vector<CMatrix>& values) {
  if (values.empty()) throw ShapeMismatch("stack_column: no values");
  const long n = values.front().rows();
  const long count = static_cast<long>(values.size());
  CMatrix out(n * count, n);
  for (long i = 0; i < count; ++i) {
    if (values[i].rows() != n || values[i].cols() != n) throw ShapeMismatch("stack_column: values must be n x n");
    for (long a = 0; a < n; ++a) out.row(a * count + i) = values[i].row(a);
  }
  return out;
}

std::vector<CMatrix> split_row(const CMatrix& omega, int count, double scale) {
  const long n = omega.rows();
  if (omega.cols() != n * count) throw ShapeMismatch("split_row: width is not n N");
  std::vector<CMatrix> out(static_cast<std::size_t>(count), CMatrix(n, n));
  for (int i = 0; i < count; ++i) {
    for (long b = 0; b < n; ++b) out[i].col(b) = omega.col(b * count + i) / scale;
  }
  return out;
}

CoronaResult corona_solve(const PolyMatrix& delta, const std::vector<GradedPoint>& points,
                          const std::vector<std::vector<CMatrix>>& psis, double epsilon,
                          const std::optional<std::vector<CMatrix>>& u, int mult,
                          const FitOptions& opts) {
  if (!(epsilon > 0.0)) throw SchemaError("corona: epsilon must be positive");
  if (psis.size() != points.size()) throw ShapeMismatch("corona: psi count differs from point count");
  if (points.empty()) throw ShapeMismatch("corona: no points");
  const int count = static_cast<int>(psis.front().size());
  std::vector<CMatrix> psi;
  std::vector<CMatrix> phi;
  for (std::size_t t = 0; t < points.size(); ++t) {
    if (static_cast<int>(psis[t].size()) != count) throw ShapeMismatch("corona: N differs between points");
    CMatrix col = stack_column(psis[t]);
    if (col.cols() != points[t].n()) throw ShapeMismatch("corona: psi level differs from point level");
    const double lo = mat::min_hermitian_eigenvalue(col.adjoint() * col);
    if (lo < epsilon * epsilon - 1e-9) {
      throw BelowFloor("corona: sum psi_i* psi_i falls below epsilon^2 at point " + std::to_string(t), lo);
    }
    const long n = points[t].n();
    phi.push_back(epsilon * CMatrix::Identity(n, n));
    psi.push_back(std::move(col));
  }

  ModelSampleSet s;
  if (u) {
    s.delta = delta;
    s.dim_h = 1;
    s.dim_k1 = count;
    s.dim_k2 = 1;
    s.mult = mult;
    s.points = points;
    s.psi = psi;
    s.phi = phi;
    s.u = *u;
  } else {
    s = scalar_pick_model(delta, points, psi, phi);
  }

  CoronaResult res;
  res.epsilon = epsilon;
  res.bound = 1.0 / epsilon;
  res.fit = fit_lurking_isometry(s, opts);
  for (std::size_t t = 0; t < points.size(); ++t) {
    const CMatrix omega = eval_direct(res.fit.realization, points[t]);
    auto ph = split_row(omega, count, epsilon);
    const long n = points[t].n();
    CMatrix sum = CMatrix::Zero(n, n);
    for (int i = 0; i < count; ++i) sum += ph[i] * psis[t][i];
    res.identity_residual = std::max(res.identity_residual, mat::op_norm(sum - CMatrix::Identity(n, n)));
    res.max_norm = std::max(res.max_norm, mat::op_norm(omega) / epsilon);
    res.phis.push_back(std::move(ph));
  }
  return res;
}

}  // namespace freeholo
