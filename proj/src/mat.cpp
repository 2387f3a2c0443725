#include "freeholo/mat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace freeholo::mat {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": shapes differ");
  }
}

}  // namespace

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double condition_number(const CMatrix& m) {
  auto s = singular_values(m);
  if (s.size() == 0) return 1.0;
  double lo = s(s.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

Inverse inv(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeMismatch("inv: matrix not square");
  if (m.size() == 0) return {CMatrix(0, 0), 1.0};
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double hi = s(0);
  double lo = s(s.size() - 1);
  if (!(lo > kSingularRel * hi)) throw SingularMatrix(lo, hi);
  Eigen::VectorXd sinv = s.cwiseInverse();
  CMatrix value = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().adjoint();
  return {std::move(value), hi / lo};
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix kron_left_identity(std::size_t n, const CMatrix& m) {
  const auto r = m.rows();
  const auto c = m.cols();
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n) * r, static_cast<Eigen::Index>(n) * c);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
    out.block(k * r, k * c, r, c) = m;
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

CMatrix add(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

CMatrix sub(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "sub");
  return a - b;
}

CMatrix mul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("mul: inner dimensions differ");
  return a * b;
}

CMatrix scalar_mul(Complex c, const CMatrix& m) { return c * m; }

double isometry_defect(const CMatrix& m) {
  if (m.rows() < m.cols()) throw ShapeMismatch("isometry_defect: rows < cols");
  CMatrix g = m.adjoint() * m;
  g -= CMatrix::Identity(m.cols(), m.cols());
  return op_norm(g);
}

CMatrix complete_to_isometry(const CMatrix& partial, std::size_t target_cols) {
  const auto rows = partial.rows();
  const auto k = partial.cols();
  const auto target = static_cast<Eigen::Index>(target_cols);
  if (target > rows) {
    throw DimensionTooSmall("complete_to_isometry: " + std::to_string(target_cols) +
                            " orthonormal columns do not fit in dimension " +
                            std::to_string(rows));
  }
  if (target < k) {
    throw ShapeMismatch("complete_to_isometry: partial already has more columns than requested");
  }
  if (k > 0 && isometry_defect(partial) > 1e-8) {
    throw ShapeMismatch("complete_to_isometry: partial columns are not orthonormal");
  }

  CMatrix out = CMatrix::Zero(rows, target);
  out.leftCols(k) = partial;
  Eigen::Index filled = k;
  for (Eigen::Index e = 0; e < rows && filled < target; ++e) {
    CVector v = CVector::Zero(rows);
    v(e) = 1.0;
    // Two projection passes keep the completion orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      if (filled > 0) {
        auto basis = out.leftCols(filled);
        v -= basis * (basis.adjoint() * v);
      }
    }
    double nrm = v.norm();
    if (nrm > 1e-6) {
      out.col(filled) = v / nrm;
      ++filled;
    }
  }
  return out;
}

double min_hermitian_eigenvalue(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeMismatch("min_hermitian_eigenvalue: not square");
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace freeholo::mat
