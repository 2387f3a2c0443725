#include "freeholo/mero.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace freeholo {

const char* to_string(BoundSource s) {
  return s == BoundSource::Asserted ? "asserted" : "sampled";
}

namespace {

// Monic polynomial with the given roots, ascending coefficients.
std::vector<Complex> from_roots(const Eigen::VectorXcd& roots) {
  std::vector<Complex> c{1.0};
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    std::vector<Complex> next(c.size() + 1, Complex{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= roots(k) * c[i];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

InversionCertificate inversion_certificate(const NcFunction& phi, const GradedPoint& m,
                                           const CMatrix& phi_m, double sup_bound,
                                           BoundSource source) {
  if (phi.dim_in != phi.dim_out) throw ShapeMismatch("inversion_certificate: phi must be square-valued");
  if (phi_m.rows() != phi_m.cols() || phi_m.rows() != static_cast<long>(m.n()) * phi.dim_in) {
    throw ShapeMismatch("inversion_certificate: phi(M) has the wrong shape");
  }
  if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound)) {
    throw SchemaError("inversion_certificate: sup bound must be finite and nonnegative");
  }
  const Eigen::VectorXd sv = mat::singular_values(phi_m);
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    throw NotInvertible("phi(M) is not invertible: sigma_min=" +
                        std::to_string(sv.size() ? sv(sv.size() - 1) : 0.0));
  }

  InversionCertificate cert;
  cert.sup_bound = sup_bound;
  cert.source = source;
  Eigen::ComplexEigenSolver<CMatrix> es(phi_m, false);
  if (es.info() != Eigen::Success) throw RootFindingFailure("eigenvalues of phi(M) did not converge");
  cert.q = from_roots(es.eigenvalues());
  const Complex q0 = cert.q.front();
  cert.p.resize(cert.q.size());
  for (std::size_t k = 0; k < cert.q.size(); ++k) cert.p[k] = cert.q[k] / q0;
  cert.p.front() = 1.0;

  // 1 - p(z) = z r(z), r(z) = -sum_{k>=1} p_k z^{k-1}; c is its leading coefficient.
  const std::size_t deg = cert.p.size() - 1;
  std::vector<Complex> r(deg);
  for (std::size_t k = 1; k <= deg; ++k) r[k - 1] = -cert.p[k];
  cert.c = r.back();
  const std::size_t rdeg = deg - 1;
  if (rdeg > 0) {
    CMatrix comp = CMatrix::Zero(static_cast<long>(rdeg), static_cast<long>(rdeg));
    for (std::size_t i = 1; i < rdeg; ++i) comp(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < rdeg; ++i) comp(static_cast<long>(i), static_cast<long>(rdeg - 1)) = -r[i] / cert.c;
    Eigen::ComplexEigenSolver<CMatrix> ce(comp, false);
    if (ce.info() != Eigen::Success) throw RootFindingFailure("companion eigenvalues did not converge");
    for (Eigen::Index k = 0; k < ce.eigenvalues().size(); ++k) {
      const Complex b = ce.eigenvalues()(k);
      if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) {
        throw RootFindingFailure("companion matrix produced non-finite roots");
      }
      cert.roots.push_back(b);
    }
  }
  double bound = 2.0 * std::abs(cert.c);
  for (const Complex& b : cert.roots) bound *= sup_bound + std::abs(b);
  if (!std::isfinite(bound)) throw RootFindingFailure("certificate bound overflowed");
  cert.bound_inv = bound;
  cert.annihilation = mat::op_norm(eval_scalar_poly(cert.p, phi_m));
  return cert;
}

CMatrix eval_scalar_poly(const std::vector<Complex>& coeffs, const CMatrix& t) {
  const long n = t.rows();
  CMatrix acc = CMatrix::Zero(n, n);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = (t * acc).eval();
    acc.diagonal().array() += *it;
  }
  return acc;
}

double CompositeDomain::norm(const GradedPoint& x) const {
  const double dn = mat::op_norm(eval_poly_matrix(delta_, x));
  if (!(dn < 1.0)) return dn;
  try {
    const CMatrix f = phi_(x);
    return std::max(dn, 2.0 * mat::op_norm(eval_scalar_poly(p_, f)));
  } catch (const MathError&) {
    return std::numeric_limits<double>::infinity();
  }
}

CertificateCheck verify_certificate(const InversionCertificate& cert, const CompositeDomain& dom,
                                    const std::vector<GradedPoint>& samples, double slack) {
  CertificateCheck out;
  for (const auto& x : samples) {
    if (!dom.inside(x)) continue;
    ++out.samples;
    const CMatrix f = dom.phi()(x);
    const Eigen::VectorXd sv = mat::singular_values(f);
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    const double inv_norm = smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
    out.worst = std::max(out.worst, inv_norm);
    if (inv_norm > cert.bound_inv + slack) ++out.violations;
  }
  return out;
}

std::vector<GradedPoint> sample_certificate_domain(const CompositeDomain& dom, const GradedPoint& m,
                                                   int count, sampling::Rng& rng, int max_tries) {
  std::vector<GradedPoint> out;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const GradedPoint mm = point_direct_sum(m, m);
  double scale = 0.5;
  int misses = 0;
  for (int attempt = 0; attempt < max_tries && static_cast<int>(out.size()) < count; ++attempt) {
    const GradedPoint& base = (attempt % 2 == 0) ? m : mm;
    const GradedPoint e = sampling::random_point(base.d(), base.n(), scale * ud(rng), rng);
    std::vector<CMatrix> mats;
    for (int r = 0; r < base.d(); ++r) mats.push_back(base[r] + e[r]);
    GradedPoint x(std::move(mats));
    if (dom.inside(x)) {
      out.push_back(std::move(x));
      misses = 0;
    } else if (++misses % 50 == 0) {
      scale *= 0.5;
    }
  }
  return out;
}

double sample_sup_bound(const NcFunction& phi, const PolyMatrix& delta, int count, int max_level,
                        sampling::Rng& rng) {
  std::uniform_int_distribution<int> lvl(1, std::max(1, max_level));
  double best = 0.0;
  for (int k = 0; k < count; ++k) {
    try {
      const GradedPoint x = sampling::random_inside(delta, lvl(rng), 1.0 - 1e-6, rng);
      best = std::max(best, mat::op_norm(phi(x)));
    } catch (const MathError&) {
    }
  }
  return best;
}

ScanReport singular_scan(const expr::Expr& e, const std::vector<GradedPoint>& samples) {
  ScanReport rep;
  for (const auto& x : samples) {
    ScanEntry entry;
    expr::EvalOutcome o = expr::try_eval_expr(e, x);
    if (o.singular_path) {
      entry.singular = true;
      entry.path = *o.singular_path;
      ++rep.flagged;
    } else if (o.value) {
      entry.norm = mat::op_norm(*o.value);
      rep.max_norm = std::max(rep.max_norm, entry.norm);
    }
    rep.entries.push_back(std::move(entry));
    ++rep.total;
  }
  return rep;
}

}  // namespace freeholo
