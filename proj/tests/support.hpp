#pragma once

#include <random>
#include <vector>

#include "freeholo/exprlang.hpp"
#include "freeholo/sampling.hpp"

namespace support {

using freeholo::CMatrix;
using freeholo::Complex;
using freeholo::GradedPoint;
using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix scalar(Complex z) { return CMatrix::Constant(1, 1, z); }

inline GradedPoint point(std::vector<CMatrix> mats) { return GradedPoint(std::move(mats)); }

/// Literal constants the parser can produce.
inline Complex literal(Rng& rng) {
  const double v = static_cast<double>(uniform_int(rng, 0, 400)) / 8.0;
  return uniform_int(rng, 0, 3) == 0 ? Complex{0.0, v} : Complex{v, 0.0};
}

/// Random tree in the parser's image: Mul never has a Const left operand,
/// ScalarMul carries a literal.
inline freeholo::expr::Expr random_expr(Rng& rng, int d, int depth, bool allow_inv) {
  using freeholo::expr::Expr;
  if (depth <= 0 || uniform_int(rng, 0, 5) == 0) {
    if (uniform_int(rng, 0, 2) == 0) return Expr::constant(literal(rng));
    return Expr::var(uniform_int(rng, 1, d));
  }
  const int pick = uniform_int(rng, 0, allow_inv ? 5 : 4);
  switch (pick) {
    case 0:
      return Expr::add(random_expr(rng, d, depth - 1, allow_inv), random_expr(rng, d, depth - 1, allow_inv));
    case 1:
      return Expr::sub(random_expr(rng, d, depth - 1, allow_inv), random_expr(rng, d, depth - 1, allow_inv));
    case 2: {
      Expr a = random_expr(rng, d, depth - 1, allow_inv);
      while (a.kind() == freeholo::expr::Kind::Const) a = random_expr(rng, d, depth - 1, allow_inv);
      return Expr::mul(a, random_expr(rng, d, depth - 1, allow_inv));
    }
    case 3:
      return Expr::neg(random_expr(rng, d, depth - 1, allow_inv));
    case 4:
      return Expr::scalar_mul(literal(rng), random_expr(rng, d, depth - 1, allow_inv));
    default:
      return Expr::inv(random_expr(rng, d, depth - 1, allow_inv));
  }
}

}  // namespace support
