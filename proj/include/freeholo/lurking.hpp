#pragma once

#include <optional>
#include <vector>

#include "freeholo/model.hpp"

namespace freeholo {

struct FitOptions {
  /// Gram tolerance relative to the largest Gram entry.
  double gram_tol = 1e-6;
  /// Singular values below rank_tol * sigma_max are dropped from span(P).
  double rank_tol = 1e-8;
  /// Reserve points with index % 5 == 4 for validation.
  bool holdout = true;
  /// Largest admissible colligation dimension after padding.
  int dim_cap = 4096;
};

struct FitReport {
  Realization realization;
  double gram_deviation = 0.0;
  int rank = 0;
  /// Multiplicity of the fitted realization, and the one the data came with.
  int mult = 0;
  int data_mult = 0;
  /// Zero columns appended to delta so that the colligation can be isometric.
  int sink_columns = 0;
  int fit_points = 0;
  int holdout_points = 0;
  /// max ||Omega psi - phi|| over fit points and over held-out points.
  double fit_residual = 0.0;
  double holdout_residual = 0.0;
};

/// Builds the lurking isometry p -> q from model data, completes it to an
/// isometric colligation and reports how well the result reproduces phi.
///
/// For every point x, level block a and column c of the data,
///   p = [psi(x); delta(x) u(x)] restricted to block a, column c,
///   q = [phi(x); u(x)]          restricted to block a, column c,
/// ordered by point, then a, then c. Throws GramMismatch when the Gram
/// matrices of the p and q families differ by more than gram_tol times the
/// largest entry; RankOverflow when padding exceeds dim_cap.
FitReport fit_lurking_isometry(const ModelSampleSet& s, const FitOptions& opts = {});

struct CoronaResult {
  FitReport fit;
  double epsilon = 0.0;
  /// phi_i at each input point: phis[t][i] is n x n.
  std::vector<std::vector<CMatrix>> phis;
  /// max || sum_i phi_i psi_i - I || over the input points.
  double identity_residual = 0.0;
  /// max ||(phi_1, ..., phi_N)|| over the input points; compare to 1 / epsilon.
  double max_norm = 0.0;
  double bound = 0.0;
};

/// psis[t] holds the N values psi_i(x_t), each n x n. The model u for
/// Psi* Psi - epsilon^2 is taken from `u` when given, otherwise derived with
/// scalar_pick_model (level-1 points, 1 x 1 delta). Throws BelowFloor when
/// Psi(x)* Psi(x) has an eigenvalue below epsilon^2 - 1e-9.
CoronaResult corona_solve(const PolyMatrix& delta, const std::vector<GradedPoint>& points,
                          const std::vector<std::vector<CMatrix>>& psis, double epsilon,
                          const std::optional<std::vector<CMatrix>>& u = std::nullopt,
                          int mult = 0, const FitOptions& opts = {});

/// Stacks N values of n x n functions into the (n N) x n column Psi, row a N + i.
CMatrix stack_column(const std::vector<CMatrix>& values);

/// phi_i = Omega / epsilon read from the (n x n N) row value Omega.
std::vector<CMatrix> split_row(const CMatrix& omega, int count, double scale);

}  // namespace freeholo
