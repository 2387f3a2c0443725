#include <doctest.h>

#include "freeholo/ncpoint.hpp"
#include "freeholo/realize.hpp"
#include "freeholo/sampling.hpp"
#include "support.hpp"

using namespace freeholo;

namespace {

GradedPoint nilpotent_pair() {
  CMatrix a(2, 2);
  a << 0.0, 1.0, 0.0, 0.0;
  CMatrix b(2, 2);
  b << 0.0, 0.0, 1.0, 0.0;
  return GradedPoint({a, b});
}

}  // namespace

TEST_CASE("point_direct_sum and conjugate") {
  const GradedPoint s = point_direct_sum(GradedPoint::scalar({1.0, 2.0}), GradedPoint::scalar({3.0, 4.0}));
  CHECK(s.n() == 2);
  CHECK(s[0](0, 0) == Complex(1.0));
  CHECK(s[0](1, 1) == Complex(3.0));
  CHECK(s[1](0, 1) == Complex(0.0));

  support::Rng rng(1);
  const GradedPoint x = sampling::random_point(2, 3, 1.0, rng);
  CHECK(mat::max_abs(conjugate(x, CMatrix::Identity(3, 3))[1] - x[1]) < 1e-15);
  const CMatrix s1 = sampling::random_invertible(3, 5.0, rng);
  const CMatrix s2 = sampling::random_invertible(3, 5.0, rng);
  const GradedPoint twice = conjugate(conjugate(x, s1), s2);
  const GradedPoint once = conjugate(x, s1 * s2);
  CHECK(mat::max_abs(twice[0] - once[0]) < 1e-12);
  CHECK_THROWS_AS(conjugate(x, CMatrix::Zero(3, 3)), SingularMatrix);
}

TEST_CASE("in_gdelta") {
  const Membership m = in_gdelta(deltas::ball({0.0}, 1.0), GradedPoint::scalar({0.5}));
  CHECK(m.verdict == Verdict::Inside);
  CHECK(m.dist == doctest::Approx(0.5));

  support::Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const GradedPoint z = GradedPoint::scalar({sampling::gaussian(rng), sampling::gaussian(rng)});
    const Membership c = in_gdelta(deltas::commutator(), z);
    CHECK(c.verdict != Verdict::Inside);
    CHECK(c.norm == doctest::Approx(1.0));
  }
  const Membership nil = in_gdelta(deltas::commutator(), nilpotent_pair());
  CHECK(nil.verdict == Verdict::Inside);
  CHECK(nil.dist == doctest::Approx(1.0));

  CHECK(in_gdelta(deltas::variable(1, 1), GradedPoint::scalar({1.0})).verdict == Verdict::Boundary);
  CHECK(in_gdelta(deltas::variable(1, 1), GradedPoint::scalar({1.5})).verdict == Verdict::Outside);
}

TEST_CASE("is_scalar_tuple") {
  CHECK(is_scalar_tuple(GradedPoint::scalar({1.0, 2.0})));
  CHECK(is_scalar_tuple(GradedPoint({2.0 * CMatrix::Identity(3, 3)})));
  CHECK_FALSE(is_scalar_tuple(nilpotent_pair()));
}

TEST_CASE("envelope_member and extend_function") {
  support::Rng rng(21);
  const GradedPoint a = sampling::random_point(2, 2, 1.0, rng);
  const GradedPoint b = sampling::random_point(2, 1, 1.0, rng);
  const GradedPoint x = point_direct_sum(a, b);
  CHECK(envelope_member(x, SimilarityWitness{{x}, CMatrix::Identity(3, 3)}));

  // Swap the two blocks with a permutation similarity.
  CMatrix perm = CMatrix::Zero(3, 3);
  perm(1, 0) = 1.0;
  perm(2, 1) = 1.0;
  perm(0, 2) = 1.0;
  const SimilarityWitness w{{b, a}, perm};
  CHECK(envelope_member(x, w));
  CHECK_FALSE(envelope_member(x, SimilarityWitness{{a, a}, CMatrix::Identity(4, 4)}));
  CHECK_FALSE(envelope_member(x, SimilarityWitness{{b, b, b}, CMatrix::Identity(3, 3)}));

  const FreePoly p = sampling::random_poly(2, 3, 5, rng);
  const CMatrix px = eval_poly(p, x);
  CHECK(mat::max_abs(extend_function({px}, SimilarityWitness{{x}, CMatrix::Identity(3, 3)}, 1, 1) - px) < 1e-14);

  const CMatrix ext = extend_function({eval_poly(p, b), eval_poly(p, a)}, w, 1, 1);
  CHECK(mat::op_norm(ext - px) <= 1e-8 * mat::condition_number(perm) * std::max(1.0, mat::op_norm(px)));

  const CMatrix s = sampling::random_invertible(3, 10.0, rng);
  const GradedPoint y = conjugate(x, s);
  const SimilarityWitness ws{{a, b}, s};
  CHECK(envelope_member(y, ws));
  const CMatrix ey = extend_function({eval_poly(p, a), eval_poly(p, b)}, ws, 1, 1);
  const CMatrix py = eval_poly(p, y);
  CHECK(mat::op_norm(ey - py) <= 1e-8 * mat::condition_number(s) * std::max(1.0, mat::op_norm(py)));
}

TEST_CASE("nc_derivative") {
  support::Rng rng(31);
  const NcFunction prod = poly_function(poly_mul(FreePoly::variable(2, 1), FreePoly::variable(2, 2)));
  const GradedPoint m = sampling::random_point(2, 3, 1.0, rng);
  const GradedPoint e = sampling::random_point(2, 3, 1.0, rng);
  const CMatrix expect = e[0] * m[1] + m[0] * e[1];
  CHECK(mat::max_abs(nc_derivative(prod, m, e) - expect) < 1e-14);

  const NcFunction constant = poly_function(FreePoly::constant(2, 3.0));
  CHECK(mat::max_abs(nc_derivative(constant, m, e)) == 0.0);

  const Realization r = realizations::mobius(Complex(0.3, 0.2));
  const NcFunction f = realization_function(r);
  const GradedPoint m1 = sampling::random_point(1, 2, 0.4, rng);
  const GradedPoint e1 = sampling::random_point(1, 2, 0.1, rng);
  const double h = 1e-5;
  const GradedPoint plus({m1[0] + h * e1[0]});
  const GradedPoint minus({m1[0] - h * e1[0]});
  const CMatrix fd = (f(plus) - f(minus)) / (2.0 * h);
  const CMatrix df = nc_derivative(f, m1, e1);
  CHECK(mat::op_norm(fd - df) <= 1e-6 * std::max(1.0, mat::op_norm(df)));
}

TEST_CASE("check_nc_axioms") {
  support::Rng rng(41);
  std::vector<GradedPoint> samples;
  for (int k = 0; k < 8; ++k) samples.push_back(sampling::random_point(2, 1 + k % 3, 0.5, rng));
  std::vector<CMatrix> sims;
  for (int n = 1; n <= 3; ++n) sims.push_back(sampling::random_invertible(n, 10.0, rng));

  const NcAxiomReport poly = check_nc_axioms(poly_function(sampling::random_poly(2, 4, 8, rng)), samples, sims);
  CHECK(poly.pass);
  CHECK(poly.block_identity_checks > 0);

  // Entrywise conjugation is graded but not similarity-covariant.
  const NcFunction conj{[](const GradedPoint& x) { return CMatrix(x[0].conjugate()); }, 1, 1};
  const NcAxiomReport bad = check_nc_axioms(conj, samples, sims);
  CHECK_FALSE(bad.pass);
  CHECK(bad.similarity > 1e-3);
}

TEST_CASE("property: membership is unitarily invariant and splits over direct sums of deltas") {
  support::Rng rng(51);
  const PolyMatrix d1 = deltas::row_ball(2);
  const PolyMatrix d2 = deltas::polydisk(2);
  const PolyMatrix both = delta_direct_sum(d1, d2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = support::uniform_int(rng, 1, 5);
    const GradedPoint x = sampling::random_point(2, n, support::uniform(rng, 0.2, 1.2), rng);
    const GradedPoint ux = conjugate(x, sampling::haar_unitary(n, rng));
    const Membership a = in_gdelta(d1, x);
    const Membership b = in_gdelta(d1, ux);
    CHECK(std::abs(a.norm - b.norm) < 1e-10);
    if (std::abs(a.norm - 1.0) > 1e-9) CHECK(a.verdict == b.verdict);

    const double nb = in_gdelta(both, x).norm;
    CHECK(nb == doctest::Approx(std::max(a.norm, in_gdelta(d2, x).norm)).epsilon(1e-14));
    const bool in_both = in_gdelta(both, x).verdict == Verdict::Inside;
    CHECK(in_both == (a.verdict == Verdict::Inside && in_gdelta(d2, x).verdict == Verdict::Inside));
  }
}

TEST_CASE("property: nc_derivative is linear in the direction") {
  support::Rng rng(61);
  const NcFunction p = poly_function(sampling::random_poly(2, 4, 6, rng));
  const NcFunction r = realization_function(realizations::random(deltas::row_ball(2), 1, 1, 2, rng));
  for (int trial = 0; trial < 50; ++trial) {
    const int n = support::uniform_int(rng, 1, 3);
    const GradedPoint m = sampling::random_point(2, n, 0.2, rng);
    const GradedPoint e1 = sampling::random_point(2, n, 0.1, rng);
    const GradedPoint e2 = sampling::random_point(2, n, 0.1, rng);
    const Complex a = sampling::gaussian(rng);
    const GradedPoint comb({a * e1[0] + e2[0], a * e1[1] + e2[1]});
    for (const NcFunction* f : {&p, &r}) {
      const CMatrix lhs = nc_derivative(*f, m, comb);
      const CMatrix rhs = a * nc_derivative(*f, m, e1) + nc_derivative(*f, m, e2);
      CHECK(mat::op_norm(lhs - rhs) <= 1e-9 * std::max(1.0, mat::op_norm(lhs)));
    }
  }
}
