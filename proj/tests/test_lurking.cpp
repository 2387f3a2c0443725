#include <doctest.h>

#include <cmath>

#include "freeholo/lurking.hpp"
#include "support.hpp"

using namespace freeholo;
using support::scalar;

namespace {

double max_deviation(const Realization& a, const Realization& b, const std::vector<GradedPoint>& pts) {
  double worst = 0.0;
  for (const auto& x : pts) worst = std::max(worst, mat::op_norm(eval_direct(a, x) - eval_direct(b, x)));
  return worst;
}

}  // namespace

TEST_CASE("fit reproduces x from its trivial model") {
  CMatrix m(2, 2);
  m << 0.1, 0.3, 0.0, 0.2;
  ModelSampleSet s;
  s.delta = deltas::variable(1, 1);
  s.mult = 1;
  s.points = {GradedPoint::scalar({0.2}), GradedPoint::scalar({Complex(0.0, 0.5)}), GradedPoint({m})};
  for (const auto& x : s.points) {
    const long n = x.n();
    s.psi.push_back(CMatrix::Identity(n, n));
    s.phi.push_back(x[0]);
    s.u.push_back(CMatrix::Identity(n, n));
  }
  const FitReport f = fit_lurking_isometry(s);
  CHECK(f.fit_residual < 1e-6);
  CHECK(f.gram_deviation < 1e-12);
  CHECK(f.mult == 1);
  CHECK(f.sink_columns == 0);
  support::Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const GradedPoint x = sampling::random_inside(s.delta, 1 + k % 3, 0.95, rng);
    CHECK(mat::op_norm(eval_direct(f.realization, x) - x[0]) < 1e-6);
  }
}

TEST_CASE("Mobius data refits from five scalar points") {
  const Realization mob = realizations::mobius(Complex(0.5, -0.1));
  std::vector<GradedPoint> pts;
  for (Complex z : {Complex(0.1, 0.0), Complex(-0.3, 0.2), Complex(0.0, 0.6), Complex(0.5, 0.5), Complex(-0.7, 0.0)}) {
    pts.push_back(GradedPoint::scalar({z}));
  }
  const ModelSampleSet s = model_from_realization(mob, pts);
  FitOptions opts;
  opts.holdout = false;
  const FitReport f = fit_lurking_isometry(s, opts);
  CHECK(f.rank == 2);
  support::Rng rng(6);
  std::vector<GradedPoint> held;
  for (int k = 0; k < 10; ++k) held.push_back(sampling::random_inside(mob.delta(), 2 + k % 3, 0.95, rng));
  CHECK(max_deviation(mob, f.realization, held) < 1e-6);
}

TEST_CASE("corrupted data is rejected") {
  const Realization mob = realizations::mobius(0.5);
  std::vector<GradedPoint> pts;
  for (double v : {0.1, -0.2, 0.4, 0.6, -0.5}) pts.push_back(GradedPoint::scalar({v}));
  ModelSampleSet s = model_from_realization(mob, pts);
  s.phi[2](0, 0) += 0.1;
  try {
    fit_lurking_isometry(s);
    FAIL("expected GramMismatch");
  } catch (const GramMismatch& e) {
    CHECK(e.deviation() >= 1e-3);
  }
}

TEST_CASE("holdout points are reported separately") {
  support::Rng rng(7);
  const Realization r = realizations::random(deltas::polydisk(2), 1, 1, 1, rng);
  std::vector<GradedPoint> pts;
  for (int k = 0; k < 10; ++k) pts.push_back(sampling::random_inside(r.delta(), 1 + k % 2, 0.9, rng));
  const FitReport f = fit_lurking_isometry(model_from_realization(r, pts));
  CHECK(f.holdout_points == 2);
  CHECK(f.fit_points == 8);
  CHECK(f.holdout_residual < 1e-6);
  CHECK(f.fit_residual < 1e-8);
}

TEST_CASE("sink columns make a non-square delta completable") {
  // Column delta (I = 2, J = 1) with K1 = 2, K2 = 1 cannot be isometric at
  // any multiplicity without extra columns.
  support::Rng rng(8);
  const PolyMatrix ball = deltas::ball({0.0, 0.0}, 1.0);
  std::vector<GradedPoint> pts;
  std::vector<CMatrix> psi;
  std::vector<CMatrix> phi;
  std::vector<CMatrix> u;
  for (int k = 0; k < 6; ++k) {
    pts.push_back(sampling::random_inside(ball, 1, 0.9, rng));
    psi.push_back(CMatrix::Zero(2, 1));
    phi.push_back(CMatrix::Zero(1, 1));
    u.push_back(CMatrix::Zero(1, 1));
  }
  ModelSampleSet s{ball, 1, 2, 1, 1, pts, psi, phi, u};
  const FitReport f = fit_lurking_isometry(s);
  CHECK(f.sink_columns >= 1);
  CHECK(f.realization.delta().cols() == 1 + f.sink_columns);
  CHECK(f.realization.defect() < 1e-10);
  CHECK(f.fit_residual < 1e-12);

  FitOptions tiny;
  tiny.dim_cap = 2;
  CHECK_THROWS_AS(fit_lurking_isometry(s, tiny), RankOverflow);
}

TEST_CASE("corona: constant case") {
  std::vector<GradedPoint> pts;
  std::vector<std::vector<CMatrix>> psis;
  std::vector<CMatrix> u;
  for (double v : {0.1, 0.5, -0.3}) {
    pts.push_back(GradedPoint::scalar({v}));
    psis.push_back({scalar(1.0)});
    u.push_back(CMatrix::Zero(0, 1));
  }
  const CoronaResult c = corona_solve(deltas::variable(1, 1), pts, psis, 1.0, u, 0);
  CHECK(c.identity_residual < 1e-12);
  for (const auto& at : c.phis) CHECK(std::abs(at[0](0, 0) - 1.0) < 1e-12);
}

TEST_CASE("corona: two functions") {
  // psi = (0.6 x, 0.8) on the disk: sum |psi_i|^2 >= 0.64 > epsilon^2.
  const double eps = 0.7;
  std::vector<GradedPoint> pts;
  std::vector<std::vector<CMatrix>> psis;
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.1), Complex(0.3, -0.6), Complex(0.8, 0.0),
                    Complex(0.0, -0.2), Complex(-0.4, -0.4)}) {
    pts.push_back(GradedPoint::scalar({z}));
    psis.push_back({scalar(0.6 * z), scalar(0.8)});
  }
  FitOptions opts;
  opts.holdout = false;
  const CoronaResult c = corona_solve(deltas::variable(1, 1), pts, psis, eps, std::nullopt, 0, opts);
  CHECK(c.identity_residual <= 1e-6);
  CHECK(c.max_norm <= 1.0 / eps + 1e-6);
  CHECK(c.bound == doctest::Approx(1.0 / eps));

  CHECK_THROWS_AS(corona_solve(deltas::variable(1, 1), pts, psis, 0.9), BelowFloor);
}

TEST_CASE("stack_column and split_row are inverse layouts") {
  support::Rng rng(9);
  const std::vector<CMatrix> vals{sampling::ginibre(2, 2, rng), sampling::ginibre(2, 2, rng), sampling::ginibre(2, 2, rng)};
  const CMatrix col = stack_column(vals);
  CHECK(col(1 * 3 + 2, 0) == vals[2](1, 0));
  const CMatrix row = col.transpose();
  const auto back = split_row(row, 3, 1.0);
  for (int i = 0; i < 3; ++i) CHECK(mat::max_abs(back[i] - vals[i].transpose()) == 0.0);
}
