#include <doctest.h>

#include <cmath>

#include "freeholo/approx.hpp"
#include "support.hpp"

using namespace freeholo;

TEST_CASE("select_covering_delta") {
  const std::vector<GradedPoint> e{GradedPoint::scalar({0.5}), GradedPoint::scalar({0.2})};
  const CoverChoice c = select_covering_delta(e, {deltas::variable(1, 1)});
  CHECK(c.index == 0);
  CHECK(c.radius == doctest::Approx(0.5));
  CHECK(c.t == doctest::Approx(1.5));

  // The first candidate fails, the second covers.
  const CoverChoice second = select_covering_delta(e, {delta_scale(deltas::variable(1, 1), 3.0), deltas::variable(1, 1)});
  CHECK(second.index == 1);
  REQUIRE(second.radii.size() == 2);
  CHECK(second.radii[0] == doctest::Approx(1.5));

  // Ties go to the first candidate.
  const CoverChoice tie = select_covering_delta(e, {deltas::variable(1, 1), deltas::polydisk(1)});
  CHECK(tie.index == 0);

  CHECK_THROWS_AS(select_covering_delta({GradedPoint::scalar({1.2})}, {deltas::variable(1, 1)}), NoCover);
  CHECK_THROWS_AS(select_covering_delta(e, {}), NoCover);

  const CoverChoice origin = select_covering_delta({GradedPoint::scalar({0.0})}, {deltas::variable(1, 1)});
  CHECK(origin.t >= 1e12);
}

TEST_CASE("close_under_direct_sums keeps the radius") {
  support::Rng rng(4);
  std::vector<GradedPoint> e;
  for (int k = 0; k < 4; ++k) e.push_back(sampling::random_point(2, 1 + k % 2, 0.4, rng));
  const auto closed = close_under_direct_sums(e, 4);
  CHECK(closed.size() > e.size());
  for (const auto& x : closed) CHECK(x.n() <= 4);
  const auto delta = deltas::polydisk(2);
  CHECK(select_covering_delta(closed, {delta}).radius == doctest::Approx(select_covering_delta(e, {delta}).radius));
  CHECK(close_under_direct_sums(e, 4, 5).size() == 5);
}

TEST_CASE("expand_polynomial: shift is exact") {
  const MatPoly p = expand_polynomial(realizations::shift(), 5);
  REQUIRE(p.term_count() == 1);
  CHECK(std::abs(p.coefficient(Word{{1}})(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("expand_polynomial: Mobius coefficients") {
  const Complex a(0.5, 0.0);
  const MatPoly p = expand_polynomial(realizations::mobius(a), 2);
  const double s = 1.0 - std::norm(a);
  const Complex ab = std::conj(a);
  CHECK(std::abs(p.coefficient(Word{})(0, 0) - a) < 1e-14);
  CHECK(std::abs(p.coefficient(Word{{1}})(0, 0) - s) < 1e-14);
  CHECK(std::abs(p.coefficient(Word{{1, 1}})(0, 0) + ab * s) < 1e-14);
  CHECK(std::abs(p.coefficient(Word{{1, 1, 1}})(0, 0) - ab * ab * s) < 1e-14);
  CHECK(p.degree() == 3);
}

TEST_CASE("expand_polynomial: K = 0 with B = 0 leaves A") {
  support::Rng rng(2);
  // Block-diagonal unitary colligation: B = C = 0.
  const CMatrix u = sampling::haar_unitary(2, rng);
  CMatrix jd = CMatrix::Zero(4, 4);
  jd.topLeftCorner(2, 2) = u;
  jd.bottomRightCorner(2, 2) = sampling::haar_unitary(2, rng);
  const Realization diag(deltas::polydisk(2), 2, 2, 1, jd);
  const MatPoly p = expand_polynomial(diag, 0);
  REQUIRE(p.term_count() == 1);
  CHECK(mat::max_abs(p.coefficient(Word{}) - u) < 1e-15);
}

TEST_CASE("certify_error and choose_truncation") {
  CHECK(certify_error(10, 2.0) == doctest::Approx(std::pow(2.0, -11)));
  CHECK(certify_error(0, 4.0) == doctest::Approx(1.0 / 12.0));
  const int k = choose_truncation(1e-4, 1.5);
  CHECK(certify_error(k, 1.5) <= 1e-4);
  CHECK(certify_error(k - 1, 1.5) > 1e-4);
  CHECK_THROWS(certify_error(3, 1.0));
}

TEST_CASE("property: truncation error stays under the certificate") {
  support::Rng rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const PolyMatrix delta = trial % 2 ? deltas::polydisk(2) : deltas::variable(1, 1);
    const Realization r = realizations::random(delta, 1, 1, 2, rng);
    const double t = 1.5 + trial * 0.5;
    const int k = 6 + trial;
    const MatPoly p = expand_polynomial(r, k);
    const double bound = certify_error(k, t);
    for (int s = 0; s < 25; ++s) {
      const GradedPoint x = sampling::random_inside(delta, 1 + s % 3, 1.0 / t, rng);
      CHECK(mat::op_norm(eval_direct(r, x) - eval_matpoly(p, x)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("property: expansion is consistent under direct sums") {
  support::Rng rng(13);
  const Realization r = realizations::random(deltas::polydisk(2), 1, 1, 1, rng);
  const MatPoly p = expand_polynomial(r, 4);
  for (int s = 0; s < 10; ++s) {
    const GradedPoint x = sampling::random_point(2, 1 + s % 2, 0.5, rng);
    const GradedPoint y = sampling::random_point(2, 1, 0.5, rng);
    const CMatrix joint = eval_matpoly(p, point_direct_sum(x, y));
    CHECK(mat::max_abs(joint - mat::direct_sum(eval_matpoly(p, x), eval_matpoly(p, y))) < 1e-12);
  }
}

TEST_CASE("DictionaryHull") {
  const std::vector<PolyMatrix> dict{deltas::variable(1, 1), delta_scale(deltas::variable(1, 1), 2.0)};
  const DictionaryHull small({GradedPoint::scalar({0.3})}, dict);
  CHECK(small.active() == std::vector<int>{0, 1});
  CHECK(small.contains(GradedPoint::scalar({0.4})));
  CHECK_FALSE(small.contains(GradedPoint::scalar({0.6})));

  const DictionaryHull wide({GradedPoint::scalar({0.7})}, dict);
  CHECK(wide.active() == std::vector<int>{0});
  CHECK(wide.contains(GradedPoint::scalar({0.6})));
  CHECK_FALSE(wide.contains(GradedPoint::scalar({1.1})));
}
