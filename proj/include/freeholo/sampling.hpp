#pragma once

#include <random>
#include <vector>

#include "freeholo/freepoly.hpp"

namespace freeholo::sampling {

using Rng = std::mt19937_64;

Complex gaussian(Rng& rng);

/// Entries i.i.d. standard complex Gaussian.
CMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-distributed unitary via QR with the phase correction on diag(R).
CMatrix haar_unitary(int n, Rng& rng);

/// First `cols` columns of a Haar unitary.
CMatrix haar_isometry(int rows, int cols, Rng& rng);

/// S = U diag(sigma) V* with sigma spread over [1, max_cond].
CMatrix random_invertible(int n, double max_cond, Rng& rng);

/// Every coordinate has operator norm exactly `radius`.
GradedPoint random_point(int d, int n, double radius, Rng& rng);

/// Random point with ||delta(x)|| <= target, found by rejection with shrinking
/// radius. Throws OutsideDomain if no point is found within max_tries.
GradedPoint random_inside(const PolyMatrix& delta, int n, double target, Rng& rng,
                          int max_tries = 200);

/// Random polynomial with up to `terms` words of degree <= max_degree.
FreePoly random_poly(int d, int max_degree, int terms, Rng& rng);

}  // namespace freeholo::sampling
