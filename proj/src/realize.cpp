#include "freeholo/realize.hpp"

#include <cmath>
#include <limits>

namespace freeholo {

namespace {

constexpr double kDomainMargin = 1e-9;

void require_inside(const Realization& r, const GradedPoint& x, double& norm) {
  if (x.d() != r.delta().d()) throw ShapeMismatch("point arity differs from delta");
  const Membership m = in_gdelta(r.delta(), x, kDomainMargin);
  if (m.verdict != Verdict::Inside) {
    throw OutsideDomain("point not inside G_delta: ||delta(x)|| = " + std::to_string(m.norm));
  }
  norm = m.norm;
}

CMatrix solve_resolvent(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.rows() == 0) return CMatrix::Zero(0, rhs.cols());
  Eigen::PartialPivLU<CMatrix> lu(lhs);
  const double rc = lu.rcond();
  if (!(rc > mat::kSingularRel)) throw SingularMatrix(rc, 1.0);
  return lu.solve(rhs);
}

}  // namespace

MatPoly promote_delta(const PolyMatrix& delta, int mult) {
  MatPoly::Terms t;
  const CMatrix id = CMatrix::Identity(mult, mult);
  for (const Word& w : delta.support()) t.emplace(w, mat::kron(delta.word_coefficients(w), id));
  return MatPoly(delta.d(), delta.rows() * mult, delta.cols() * mult, std::move(t));
}

Realization::Realization(PolyMatrix delta, int dim_k1, int dim_k2, int mult, CMatrix j1)
    : delta_(std::move(delta)), k1_(dim_k1), k2_(dim_k2), mult_(mult), j1_(std::move(j1)) {
  if (k1_ < 0 || k2_ < 0 || mult_ < 0) throw ShapeMismatch("Realization: negative dimension");
  const int rows = k2_ + internal_in();
  const int cols = k1_ + internal_out();
  if (j1_.rows() != rows || j1_.cols() != cols) {
    throw ShapeMismatch("Realization: J1 is " + std::to_string(j1_.rows()) + "x" +
                        std::to_string(j1_.cols()) + ", expected " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  }
  if (!mat::all_finite(j1_)) throw SchemaError("Realization: J1 has non-finite entries");
  if (rows < cols) throw NotIsometric(std::numeric_limits<double>::infinity());
  defect_ = cols == 0 ? 0.0 : mat::isometry_defect(j1_);
  if (defect_ > kIsometryTol) throw NotIsometric(defect_);
  promoted_ = promote_delta(delta_, mult_);
}

CMatrix eval_state(const Realization& r, const GradedPoint& x) {
  double norm = 0.0;
  require_inside(r, x, norm);
  const auto n = static_cast<std::size_t>(x.n());
  const CMatrix dx = eval_matpoly(r.promoted(), x);
  const CMatrix dhat = mat::kron_left_identity(n, r.d());
  const CMatrix chat = mat::kron_left_identity(n, r.c());
  const CMatrix lhs = CMatrix::Identity(dhat.rows(), dhat.rows()) - dhat * dx;
  return solve_resolvent(lhs, chat);
}

CMatrix eval_direct(const Realization& r, const GradedPoint& x) {
  const auto n = static_cast<std::size_t>(x.n());
  const CMatrix v = eval_state(r, x);
  const CMatrix dx = eval_matpoly(r.promoted(), x);
  CMatrix out = mat::kron_left_identity(n, r.a());
  if (r.internal_out() > 0) out += mat::kron_left_identity(n, r.b()) * (dx * v);
  return out;
}

NcFunction realization_function(const Realization& r) {
  return NcFunction{[r](const GradedPoint& x) { return eval_direct(r, x); }, r.dim_k1(),
                    r.dim_k2()};
}

int neumann_terms(double r0, double tol) {
  if (r0 <= 0.0) return 0;
  // r0^{K+2} <= tol (1 - r0)
  const double need = std::log(tol * (1.0 - r0)) / std::log(r0) - 2.0;
  int k = std::max(0, static_cast<int>(std::ceil(need)) - 1);
  while (k > 0 && std::pow(r0, k + 1) / (1.0 - r0) <= tol) --k;
  while (std::pow(r0, k + 2) / (1.0 - r0) > tol) ++k;
  return k;
}

NeumannResult eval_neumann(const Realization& r, const GradedPoint& x, double tol, int max_terms) {
  if (!(tol > 0.0)) throw SchemaError("eval_neumann: tol must be positive");
  double r0 = 0.0;
  require_inside(r, x, r0);
  const auto n = static_cast<std::size_t>(x.n());
  NeumannResult res;
  res.value = mat::kron_left_identity(n, r.a());
  if (r.internal_out() == 0) return res;

  const int k_target = neumann_terms(r0, tol);
  if (k_target > max_terms) {
    throw TermBlowup("eval_neumann: " + std::to_string(k_target) + " terms exceed the cap");
  }
  const CMatrix dx = eval_matpoly(r.promoted(), x);
  const CMatrix bhat = mat::kron_left_identity(n, r.b());
  const CMatrix dhat = mat::kron_left_identity(n, r.d());
  CMatrix w = mat::kron_left_identity(n, r.c());
  res.tail_bound = std::pow(r0, k_target + 2) / (1.0 - r0);
  int k = 0;
  for (; k <= k_target; ++k) {
    const CMatrix dw = dx * w;
    res.value += bhat * dw;
    w = dhat * dw;
    if (mat::max_abs(w) == 0.0) {
      res.tail_bound = 0.0;
      break;
    }
  }
  res.terms = std::min(k, k_target);
  const double eps = std::numeric_limits<double>::epsilon();
  const double dim = static_cast<double>(res.value.rows() + dx.rows() + dx.cols());
  res.bound = res.tail_bound + 16.0 * eps * (res.terms + 2) * dim;
  return res;
}

namespace realizations {

Realization shift(int d, int r) {
  CMatrix j1(2, 2);
  j1 << 0.0, 1.0, 1.0, 0.0;
  return Realization(deltas::variable(d, r), 1, 1, 1, j1);
}

Realization mobius(Complex a) {
  if (!(std::abs(a) < 1.0)) throw SchemaError("mobius: |a| must be < 1");
  const double s = std::sqrt(1.0 - std::norm(a));
  CMatrix j1(2, 2);
  j1 << a, s, s, -std::conj(a);
  return Realization(deltas::variable(1, 1), 1, 1, 1, j1);
}

Realization random(const PolyMatrix& delta, int dim_k1, int dim_k2, int mult, sampling::Rng& rng) {
  const int rows = dim_k2 + delta.cols() * mult;
  const int cols = dim_k1 + delta.rows() * mult;
  if (rows < cols) throw DimensionTooSmall("random realization: codomain smaller than domain");
  return Realization(delta, dim_k1, dim_k2, mult, sampling::haar_isometry(rows, cols, rng));
}

}  // namespace realizations

}  // namespace freeholo
