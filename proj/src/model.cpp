#include "freeholo/model.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace freeholo {

namespace {

void check_shape(const CMatrix& m, long rows, long cols, const char* what, std::size_t idx) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeMismatch(std::string("model: ") + what + " at point " + std::to_string(idx) + " is " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void ModelSampleSet::validate() const {
  const std::size_t count = points.size();
  if (psi.size() != count || phi.size() != count || u.size() != count) {
    throw ShapeMismatch("model: psi/phi/u counts differ from point count");
  }
  if (dim_h < 0 || dim_k1 < 0 || dim_k2 < 0 || mult < 0) throw ShapeMismatch("model: negative dimension");
  for (std::size_t t = 0; t < count; ++t) {
    const GradedPoint& x = points[t];
    if (x.d() != delta.d()) throw ShapeMismatch("model: point arity differs from delta");
    const long n = x.n();
    check_shape(psi[t], n * dim_k1, n * dim_h, "psi", t);
    check_shape(phi[t], n * dim_k2, n * dim_h, "phi", t);
    check_shape(u[t], n * delta.cols() * mult, n * dim_h, "u", t);
    const Membership m = in_gdelta(delta, x);
    if (m.verdict != Verdict::Inside) {
      throw OutsideDomain("model: point " + std::to_string(t) + " not inside G_delta");
    }
  }
}

double model_residual(const ModelSampleSet& s) {
  s.validate();
  const MatPoly dhat = promote_delta(s.delta, s.mult);
  std::vector<CMatrix> du;
  du.reserve(s.points.size());
  for (std::size_t t = 0; t < s.points.size(); ++t) {
    du.push_back(eval_matpoly(dhat, s.points[t]) * s.u[t]);
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < s.points.size(); ++x) {
    for (std::size_t y = 0; y < s.points.size(); ++y) {
      if (s.points[x].n() != s.points[y].n()) continue;
      const CMatrix lhs = s.psi[y].adjoint() * s.psi[x] - s.phi[y].adjoint() * s.phi[x];
      const CMatrix rhs = s.u[y].adjoint() * s.u[x] - du[y].adjoint() * du[x];
      worst = std::max(worst, mat::op_norm(lhs - rhs));
    }
  }
  return worst;
}

ModelSampleSet model_from_realization(const Realization& r, const std::vector<GradedPoint>& points,
                                      const std::vector<CMatrix>& psi, int dim_h) {
  if (psi.size() != points.size()) throw ShapeMismatch("model_from_realization: psi count differs");
  ModelSampleSet s;
  s.delta = r.delta();
  s.dim_h = dim_h;
  s.dim_k1 = r.dim_k1();
  s.dim_k2 = r.dim_k2();
  s.mult = r.mult();
  s.points = points;
  s.psi = psi;
  for (std::size_t t = 0; t < points.size(); ++t) {
    const long n = points[t].n();
    check_shape(psi[t], n * r.dim_k1(), n * dim_h, "psi", t);
    const CMatrix v = eval_state(r, points[t]);
    s.phi.push_back(eval_direct(r, points[t]) * psi[t]);
    s.u.push_back(v * psi[t]);
  }
  return s;
}

ModelSampleSet model_from_realization(const Realization& r, const std::vector<GradedPoint>& points) {
  std::vector<CMatrix> psi;
  psi.reserve(points.size());
  for (const auto& x : points) {
    const long k = x.n() * r.dim_k1();
    psi.push_back(CMatrix::Identity(k, k));
  }
  return model_from_realization(r, points, psi, r.dim_k1());
}

double diagonal_positivity(const ModelSampleSet& s) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < s.points.size(); ++t) {
    const CMatrix g = s.psi[t].adjoint() * s.psi[t] - s.phi[t].adjoint() * s.phi[t];
    if (g.rows() == 0) continue;
    lo = std::min(lo, mat::min_hermitian_eigenvalue(g));
  }
  return lo;
}

ModelSampleSet scalar_pick_model(const PolyMatrix& delta, const std::vector<GradedPoint>& points,
                                 const std::vector<CMatrix>& psi, const std::vector<CMatrix>& phi) {
  if (delta.rows() != 1 || delta.cols() != 1) {
    throw ShapeMismatch("scalar_pick_model: delta must be 1 x 1");
  }
  if (psi.size() != points.size() || phi.size() != points.size()) {
    throw ShapeMismatch("scalar_pick_model: psi/phi counts differ from point count");
  }
  if (points.empty()) throw ShapeMismatch("scalar_pick_model: no points");
  const int h = static_cast<int>(psi.front().cols());
  const int count = static_cast<int>(points.size());
  std::vector<Complex> dv;
  for (int t = 0; t < count; ++t) {
    if (points[t].n() != 1) throw ShapeMismatch("scalar_pick_model: points must be level 1");
    if (psi[t].cols() != h || phi[t].cols() != h || psi[t].rows() != psi.front().rows() ||
        phi[t].rows() != phi.front().rows()) {
      throw ShapeMismatch("scalar_pick_model: inconsistent psi/phi shapes");
    }
    const Complex v = eval_poly_matrix(delta, points[t])(0, 0);
    if (!(std::abs(v) < 1.0 - kDefaultMargin)) {
      throw OutsideDomain("scalar_pick_model: point " + std::to_string(t) + " not inside G_delta");
    }
    dv.push_back(v);
  }

  CMatrix lambda(count * h, count * h);
  for (int y = 0; y < count; ++y) {
    for (int x = 0; x < count; ++x) {
      const CMatrix g = psi[y].adjoint() * psi[x] - phi[y].adjoint() * phi[x];
      lambda.block(y * h, x * h, h, h) = g / (1.0 - std::conj(dv[y]) * dv[x]);
    }
  }
  lambda = (0.5 * (lambda + lambda.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lambda);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  const double floor = -1e-9 * std::max(1.0, top);
  if (ev.minCoeff() < floor) {
    throw BelowFloor("Pick matrix is not positive semidefinite", ev.minCoeff());
  }
  std::vector<int> keep;
  for (int k = static_cast<int>(ev.size()) - 1; k >= 0; --k) {
    if (ev(k) > 1e-12 * top && ev(k) > 0.0) keep.push_back(k);
  }
  const int rank = static_cast<int>(keep.size());
  // Lambda = F* F with F = sqrt(diag) V*; u(x) is the column block of x.
  CMatrix f(rank, count * h);
  for (int i = 0; i < rank; ++i) {
    f.row(i) = std::sqrt(ev(keep[i])) * es.eigenvectors().col(keep[i]).adjoint();
  }

  ModelSampleSet s;
  s.delta = delta;
  s.dim_h = h;
  s.dim_k1 = static_cast<int>(psi.front().rows());
  s.dim_k2 = static_cast<int>(phi.front().rows());
  s.mult = rank;
  s.points = points;
  s.psi = psi;
  s.phi = phi;
  for (int t = 0; t < count; ++t) s.u.push_back(f.middleCols(t * h, h));
  return s;
}

}  // namespace freeholo
