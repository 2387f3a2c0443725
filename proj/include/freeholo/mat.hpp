#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "freeholo/errors.hpp"

namespace freeholo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace mat {

// Relative threshold below which the smallest singular value declares a
// matrix singular.
inline constexpr double kSingularRel = 1e-12;

/// Largest singular value (full SVD). Zero for empty matrices.
double op_norm(const CMatrix& m);

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const CMatrix& m);

/// sigma_max / sigma_min; +inf when singular.
double condition_number(const CMatrix& m);

struct Inverse {
  CMatrix value;
  double cond = 1.0;
};

/// SVD-based inverse with a condition estimate.
/// Throws SingularMatrix when sigma_min <= 1e-12 * sigma_max.
Inverse inv(const CMatrix& m);

CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// I_n (x) m, with the identity as the outer factor.
CMatrix kron_left_identity(std::size_t n, const CMatrix& m);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

CMatrix adjoint(const CMatrix& m);
CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix sub(const CMatrix& a, const CMatrix& b);
CMatrix mul(const CMatrix& a, const CMatrix& b);
CMatrix scalar_mul(Complex c, const CMatrix& m);

/// ||m* m - I||. Requires rows >= cols.
double isometry_defect(const CMatrix& m);

/// Extends a matrix with orthonormal columns (within 1e-8) to an isometry
/// with target_cols columns. The leading columns are `partial`; the rest
/// come from Gram-Schmidt on e_1, e_2, ... in index order.
CMatrix complete_to_isometry(const CMatrix& partial, std::size_t target_cols);

/// Smallest eigenvalue of the Hermitian part of m.
double min_hermitian_eigenvalue(const CMatrix& m);

/// Largest absolute entry; zero for empty matrices.
double max_abs(const CMatrix& m);

bool all_finite(const CMatrix& m);

}  // namespace mat
}  // namespace freeholo
