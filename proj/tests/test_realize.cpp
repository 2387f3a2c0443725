#include <doctest.h>

#include <cmath>

#include "freeholo/realize.hpp"
#include "support.hpp"

using namespace freeholo;

TEST_CASE("Realization validation") {
  CMatrix j1(2, 2);
  j1 << 0.0, 1.0, 1.0, 0.0;
  CHECK_NOTHROW(Realization(deltas::variable(1, 1), 1, 1, 1, j1));
  CHECK_THROWS_AS(Realization(deltas::variable(1, 1), 1, 1, 1, 2.0 * j1), NotIsometric);
  CHECK_THROWS_AS(Realization(deltas::variable(1, 1), 1, 1, 2, j1), ShapeMismatch);

  const Realization r = realizations::shift();
  CHECK(r.a()(0, 0) == Complex(0.0));
  CHECK(r.b()(0, 0) == Complex(1.0));
  CHECK(r.c()(0, 0) == Complex(1.0));
  CHECK(r.d()(0, 0) == Complex(0.0));
}

TEST_CASE("eval_direct") {
  support::Rng rng(1);
  const Realization shift = realizations::shift();
  for (int n = 1; n <= 4; ++n) {
    const GradedPoint x = sampling::random_point(1, n, 0.7, rng);
    CHECK(mat::max_abs(eval_direct(shift, x) - x[0]) < 1e-15);
  }

  // B = 0: Omega is the constant I (x) A.
  CMatrix j1 = CMatrix::Zero(2, 2);
  j1(0, 0) = Complex(0.0, 1.0);
  j1(1, 1) = 1.0;
  const Realization constant(deltas::variable(1, 1), 1, 1, 1, j1);
  const GradedPoint x = sampling::random_point(1, 3, 0.5, rng);
  CHECK(mat::max_abs(eval_direct(constant, x) - Complex(0.0, 1.0) * CMatrix::Identity(3, 3)) == 0.0);

  const Realization mob = realizations::mobius(0.5);
  const CMatrix v = eval_direct(mob, GradedPoint::scalar({0.3}));
  CHECK(std::abs(v(0, 0) - 0.8 / 1.15) < 1e-14);
  CHECK(std::abs(v(0, 0) - 0.695652) < 1e-6);

  CHECK_THROWS_AS(eval_direct(mob, GradedPoint::scalar({1.0})), OutsideDomain);
  CHECK_THROWS_AS(eval_direct(mob, GradedPoint::scalar({1.5})), OutsideDomain);
}

TEST_CASE("Mobius at matrix points matches the closed form") {
  support::Rng rng(2);
  const Complex a(0.4, -0.3);
  const Realization mob = realizations::mobius(a);
  for (int n = 1; n <= 5; ++n) {
    const GradedPoint x = sampling::random_point(1, n, 0.8, rng);
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix expect = (a * id + x[0]) * mat::inv(id + std::conj(a) * x[0]).value;
    CHECK(mat::op_norm(eval_direct(mob, x) - expect) < 1e-13);
  }
}

TEST_CASE("eval_neumann") {
  const Realization mob = realizations::mobius(0.5);
  const GradedPoint x = GradedPoint::scalar({0.3});
  const NeumannResult res = eval_neumann(mob, x, 1e-8);
  CHECK(res.terms == 14);
  CHECK(std::abs(res.value(0, 0) - eval_direct(mob, x)(0, 0)) <= 1e-8);
  CHECK(std::abs(res.value(0, 0) - eval_direct(mob, x)(0, 0)) <= res.bound);
  CHECK(neumann_terms(0.3, 1e-8) == 14);

  const NeumannResult shift = eval_neumann(realizations::shift(), GradedPoint::scalar({0.9}), 1e-12);
  CHECK(shift.terms == 0);
  CHECK(shift.tail_bound == 0.0);
  CHECK(std::abs(shift.value(0, 0) - 0.9) < 1e-16);

  int previous = 1 << 30;
  for (double tol : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
    const int k = eval_neumann(mob, x, tol).terms;
    CHECK(k <= previous);
    previous = k;
  }
  CHECK_THROWS_AS(eval_neumann(mob, GradedPoint::scalar({1.2}), 1e-8), OutsideDomain);
}

TEST_CASE("property: contractivity, nc axioms and certified Neumann sums") {
  support::Rng rng(1234);
  const std::vector<PolyMatrix> domains{deltas::variable(1, 1), deltas::row_ball(2), deltas::polydisk(2),
                                        deltas::ball({0.1, 0.0}, 1.5)};
  for (int trial = 0; trial < 12; ++trial) {
    const PolyMatrix& delta = domains[trial % domains.size()];
    const int mult = support::uniform_int(rng, 1, 3);
    const int k = support::uniform_int(rng, 1, 2);
    const int rows_needed = k + delta.rows() * mult - delta.cols() * mult;
    const int k2 = std::max(k, rows_needed);
    const Realization r = realizations::random(delta, k, k2, mult, rng);
    CHECK(r.defect() < 1e-12);
    std::vector<GradedPoint> pts;
    for (int s = 0; s < 20; ++s) {
      const GradedPoint x = sampling::random_inside(delta, support::uniform_int(rng, 1, 4), 0.95, rng);
      const CMatrix v = eval_direct(r, x);
      CHECK(mat::op_norm(v) <= 1.0 + 1e-7);
      const NeumannResult nr = eval_neumann(r, x, 1e-9);
      CHECK(mat::op_norm(nr.value - v) <= nr.bound);
      if (s < 6) pts.push_back(x);
    }
    std::vector<CMatrix> sims;
    for (int n = 1; n <= 4; ++n) sims.push_back(sampling::random_invertible(n, 4.0, rng));
    const NcAxiomReport rep = check_nc_axioms(realization_function(r), pts, sims);
    CHECK(rep.pass);
    CHECK(rep.direct_sum_checks > 0);
  }
}
