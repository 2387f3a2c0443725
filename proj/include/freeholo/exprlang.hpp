#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "freeholo/freepoly.hpp"

namespace freeholo::expr {

enum class Kind { Const, Var, Add, Sub, Mul, Neg, ScalarMul, Inv };

/// Immutable expression tree for free rational expressions. Copies share
/// structure; equality is structural.
///
/// ScalarMul(c, e) is what the parser produces for `c*e` when the left
/// operand is a numeric literal. Mul is reserved for products whose left
/// operand is anything else.
class Expr {
 public:
  static Expr constant(Complex c);
  static Expr var(int index);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr scalar_mul(Complex c, Expr a);
  static Expr inv(Expr a);

  Kind kind() const { return node_->kind; }
  /// Constant value (Const) or scalar factor (ScalarMul).
  Complex value() const { return node_->value; }
  /// 1-based variable index (Var).
  int index() const { return node_->index; }
  int child_count() const;
  const Expr& child(int i) const;

  bool has_inv() const;
  int max_var() const;
  std::size_t node_count() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node {
    Kind kind;
    Complex value{};
    int index = 0;
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind k, Complex v, int idx, std::vector<Expr> children);

  std::shared_ptr<const Node> node_;
};

/// Grammar (whitespace-insensitive):
///   expr   := term (('+' | '-') term)*
///   term   := factor ('*' factor)*
///   factor := number | 'x' INT | '(' expr ')' | 'inv' '(' expr ')' | '-' factor
/// Numbers are decimal with optional exponent and an optional trailing 'i'.
/// Throws SyntaxError (with byte offset) or UnknownVariable for x0 or x_k, k > d.
Expr parse(std::string_view src, int d);

/// Canonical text; parse(print(e)) == e for every tree the parser can produce.
std::string print(const Expr& e);

/// Source text for a free polynomial whose parse expands back to exactly p.
std::string poly_source(const FreePoly& p);

/// Expands an inv-free tree; throws NotPolynomial otherwise.
FreePoly to_free_poly(const Expr& e, int d);

/// Recursive evaluation. Throws SingularityHit with the path of the failing
/// inv node when an inversion meets a singular matrix.
CMatrix eval_expr(const Expr& e, const GradedPoint& x);

struct EvalOutcome {
  std::optional<CMatrix> value;
  std::optional<std::vector<int>> singular_path;
};

/// Non-throwing variant of eval_expr for singularity scans.
EvalOutcome try_eval_expr(const Expr& e, const GradedPoint& x);

/// Shortest text that reads back to the same double.
std::string format_real(double v);

}  // namespace freeholo::expr
