#include "freeholo/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "freeholo/errors.hpp"

namespace freeholo::sampling {

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = gaussian(rng);
  }
  return m;
}

CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

CMatrix haar_isometry(int rows, int cols, Rng& rng) {
  if (cols > rows) throw DimensionTooSmall("haar_isometry: more columns than rows");
  return haar_unitary(rows, rng).leftCols(cols);
}

CMatrix random_invertible(int n, double max_cond, Rng& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const CMatrix u = haar_unitary(n, rng);
  const CMatrix v = haar_unitary(n, rng);
  Eigen::VectorXcd s(n);
  for (int k = 0; k < n; ++k) s(k) = std::pow(max_cond, ud(rng));
  if (n > 1) {
    s(0) = 1.0;
    s(n - 1) = max_cond;
  }
  return u * s.asDiagonal() * v.adjoint();
}

GradedPoint random_point(int d, int n, double radius, Rng& rng) {
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    CMatrix m = ginibre(n, n, rng);
    const double nrm = mat::op_norm(m);
    if (nrm > 0.0) m *= radius / nrm;
    mats.push_back(std::move(m));
  }
  return GradedPoint(std::move(mats));
}

GradedPoint random_inside(const PolyMatrix& delta, int n, double target, Rng& rng, int max_tries) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double radius = 1.0;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    GradedPoint x = random_point(delta.d(), n, radius * ud(rng), rng);
    if (mat::op_norm(eval_poly_matrix(delta, x)) <= target) return x;
    if (attempt % 10 == 9) radius *= 0.5;
  }
  throw OutsideDomain("random_inside: no sample found inside the domain");
}

FreePoly random_poly(int d, int max_degree, int terms, Rng& rng) {
  std::uniform_int_distribution<int> len(0, max_degree);
  std::uniform_int_distribution<int> letter(1, d);
  FreePoly::Terms t;
  for (int k = 0; k < terms; ++k) {
    Word w;
    const int l = len(rng);
    for (int j = 0; j < l; ++j) w.letters.push_back(letter(rng));
    t[w] += gaussian(rng);
  }
  return FreePoly(d, std::move(t));
}

}  // namespace freeholo::sampling
