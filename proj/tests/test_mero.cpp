#include <doctest.h>

#include <cmath>

#include "freeholo/mero.hpp"
#include "support.hpp"

using namespace freeholo;
using support::scalar;

namespace {

NcFunction expr_function(const std::string& src, int d) {
  const expr::Expr e = expr::parse(src, d);
  return NcFunction{[e](const GradedPoint& x) { return expr::eval_expr(e, x); }, 1, 1};
}

}  // namespace

TEST_CASE("certificate for phi = x at M = 1") {
  const NcFunction phi = expr_function("x1", 1);
  const GradedPoint m = GradedPoint::scalar({1.0});
  const InversionCertificate c = inversion_certificate(phi, m, phi(m), 1.0);
  REQUIRE(c.p.size() == 2);
  CHECK(std::abs(c.p[0] - 1.0) < 1e-14);
  CHECK(std::abs(c.p[1] + 1.0) < 1e-14);
  CHECK(std::abs(c.c - 1.0) < 1e-14);
  CHECK(c.roots.empty());
  CHECK(c.bound_inv == doctest::Approx(2.0));
  CHECK(c.annihilation < 1e-14);
  CHECK(c.source == BoundSource::Asserted);
  CHECK(std::string(to_string(BoundSource::Sampled)) == "sampled");
}

TEST_CASE("certificate for a constant") {
  const NcFunction phi = expr_function("2", 1);
  const GradedPoint m = GradedPoint::scalar({0.3});
  const InversionCertificate c = inversion_certificate(phi, m, phi(m), 2.0);
  CHECK(std::abs(c.c - 0.5) < 1e-14);
  CHECK(c.bound_inv == doctest::Approx(1.0));
}

TEST_CASE("certificate rejects a singular value") {
  const NcFunction phi = expr_function("x1", 1);
  const GradedPoint m = GradedPoint::scalar({0.0});
  CHECK_THROWS_AS(inversion_certificate(phi, m, phi(m), 1.0), NotInvertible);
  CMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, 0.0;
  const GradedPoint sm({s});
  CHECK_THROWS_AS(inversion_certificate(phi, sm, phi(sm), 1.0), NotInvertible);
}

TEST_CASE("property: p annihilates phi(M) and p(0) = 1") {
  support::Rng rng(21);
  const NcFunction phi = expr_function("1 + 0.5*x1*x2", 2);
  for (int trial = 0; trial < 10; ++trial) {
    const GradedPoint m = sampling::random_point(2, 1 + trial % 4, 0.8, rng);
    const CMatrix v = phi(m);
    const InversionCertificate c = inversion_certificate(phi, m, v, 1.5);
    CHECK(std::abs(c.p[0] - 1.0) < 1e-12);
    CHECK(mat::op_norm(eval_scalar_poly(c.p, v)) < 1e-8);
    // 1 - p(z) = c z prod (z - beta) at a test value.
    const Complex z(0.3, -0.2);
    Complex lhs = 1.0;
    Complex zk = 1.0;
    for (const auto& pk : c.p) {
      lhs -= pk * zk;
      zk *= z;
    }
    Complex rhs = c.c * z;
    for (const auto& b : c.roots) rhs *= (z - b);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("verify_certificate: phi = x on the half disk") {
  const PolyMatrix delta = delta_scale(deltas::variable(1, 1), 0.5);
  const NcFunction phi = expr_function("x1", 1);
  const GradedPoint m = GradedPoint::scalar({Complex(0.8, 0.3)});
  const InversionCertificate c = inversion_certificate(phi, m, phi(m), 2.0);
  const CompositeDomain dom(delta, phi, c.p);
  CHECK(dom.inside(m));
  support::Rng rng(22);
  const auto pts = sample_certificate_domain(dom, m, 200, rng);
  CHECK(pts.size() == 200);
  const CertificateCheck chk = verify_certificate(c, dom, pts);
  CHECK(chk.samples == 200);
  CHECK(chk.violations == 0);
  CHECK(chk.worst <= c.bound_inv);
}

TEST_CASE("sample_sup_bound stays below the true sup") {
  support::Rng rng(23);
  const double b = sample_sup_bound(expr_function("x1*x2", 2), deltas::polydisk(2), 50, 3, rng);
  CHECK(b > 0.1);
  CHECK(b < 1.0);
}

TEST_CASE("singular_scan") {
  CMatrix inv2(2, 2);
  inv2 << 0.5, 1.0, 0.0, -0.5;
  const std::vector<GradedPoint> pts{GradedPoint::scalar({0.5}), GradedPoint::scalar({0.0}),
                                     GradedPoint::scalar({Complex(0.0, 1.0)}), GradedPoint({inv2})};
  const ScanReport r = singular_scan(expr::parse("inv(x1)", 1), pts);
  CHECK(r.total == 4);
  CHECK(r.flagged == 1);
  CHECK(r.entries[1].singular);
  CHECK_FALSE(r.entries[0].singular);
  CHECK(r.entries[0].norm == doctest::Approx(2.0));

  support::Rng rng(24);
  std::vector<GradedPoint> disk;
  for (int k = 0; k < 30; ++k) disk.push_back(sampling::random_inside(deltas::polydisk(2), 1 + k % 3, 0.95, rng));
  const ScanReport none = singular_scan(expr::parse("inv(1 - x1*x2)", 2), disk);
  CHECK(none.flagged == 0);
  CHECK(none.max_norm < 1.0 / (1.0 - 0.95 * 0.95) + 1e-9);
}

TEST_CASE("property: scans are invariant under unitary conjugation") {
  support::Rng rng(25);
  const expr::Expr e = expr::parse("inv(x1 - x2) + x1*inv(x2)", 2);
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 3;
    GradedPoint x = sampling::random_point(2, n, 0.7, rng);
    if (k % 4 == 0) x = GradedPoint({x[0], x[0]});
    const CMatrix u = sampling::haar_unitary(n, rng);
    const ScanReport a = singular_scan(e, {x});
    const ScanReport b = singular_scan(e, {conjugate(x, u)});
    CHECK(a.flagged == b.flagged);
    if (!a.entries[0].singular) CHECK(a.entries[0].norm == doctest::Approx(b.entries[0].norm).epsilon(1e-8));
  }
}
