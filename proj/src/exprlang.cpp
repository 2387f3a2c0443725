#include "freeholo/exprlang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace freeholo::expr {

// ----------------------------------------------------------------------- Expr

Expr Expr::make(Kind k, Complex v, int idx, std::vector<Expr> children) {
  return Expr(std::make_shared<const Node>(Node{k, v, idx, std::move(children)}));
}

Expr Expr::constant(Complex c) { return make(Kind::Const, c, 0, {}); }
Expr Expr::var(int index) { return make(Kind::Var, {}, index, {}); }
Expr Expr::add(Expr a, Expr b) { return make(Kind::Add, {}, 0, {std::move(a), std::move(b)}); }
Expr Expr::sub(Expr a, Expr b) { return make(Kind::Sub, {}, 0, {std::move(a), std::move(b)}); }
Expr Expr::mul(Expr a, Expr b) { return make(Kind::Mul, {}, 0, {std::move(a), std::move(b)}); }
Expr Expr::neg(Expr a) { return make(Kind::Neg, {}, 0, {std::move(a)}); }
Expr Expr::scalar_mul(Complex c, Expr a) { return make(Kind::ScalarMul, c, 0, {std::move(a)}); }
Expr Expr::inv(Expr a) { return make(Kind::Inv, {}, 0, {std::move(a)}); }

int Expr::child_count() const { return static_cast<int>(node_->children.size()); }

const Expr& Expr::child(int i) const { return node_->children.at(static_cast<std::size_t>(i)); }

bool Expr::has_inv() const {
  if (kind() == Kind::Inv) return true;
  for (const auto& c : node_->children) {
    if (c.has_inv()) return true;
  }
  return false;
}

int Expr::max_var() const {
  int m = kind() == Kind::Var ? index() : 0;
  for (const auto& c : node_->children) m = std::max(m, c.max_var());
  return m;
}

std::size_t Expr::node_count() const {
  std::size_t total = 1;
  for (const auto& c : node_->children) total += c.node_count();
  return total;
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Const:
      return value() == other.value();
    case Kind::Var:
      return index() == other.index();
    case Kind::ScalarMul:
      if (value() != other.value()) return false;
      break;
    default:
      break;
  }
  return node_->children == other.node_->children;
}

// --------------------------------------------------------------------- Lexing

namespace {

enum class Tok { Number, Var, Inv, Plus, Minus, Star, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  Complex number{};
  int var = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, start};
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Tok::Plus, start};
      case '-': ++pos_; return {Tok::Minus, start};
      case '*': ++pos_; return {Tok::Star, start};
      case '(': ++pos_; return {Tok::LParen, start};
      case ')': ++pos_; return {Tok::RParen, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (c == 'x') return variable(start);
    if (src_.substr(pos_, 3) == "inv") {
      pos_ += 3;
      return {Tok::Inv, start};
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  bool digit_at(std::size_t p) const {
    return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
  }

  Token number(std::size_t start) {
    std::size_t p = pos_;
    while (digit_at(p)) ++p;
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      while (digit_at(p)) ++p;
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (digit_at(q)) {
        p = q;
        while (digit_at(p)) ++p;
      }
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + p, v);
    if (ec != std::errc() || end != src_.data() + p) throw SyntaxError("malformed number", start);
    pos_ = p;
    Token t{Tok::Number, start};
    if (pos_ < src_.size() && src_[pos_] == 'i') {
      ++pos_;
      t.number = Complex(0.0, v);
    } else {
      t.number = Complex(v, 0.0);
    }
    return t;
  }

  Token variable(std::size_t start) {
    std::size_t p = pos_ + 1;
    if (!digit_at(p)) throw SyntaxError("expected variable index after 'x'", start);
    std::size_t q = p;
    while (digit_at(q)) ++q;
    int idx = 0;
    auto [end, ec] = std::from_chars(src_.data() + p, src_.data() + q, idx);
    if (ec != std::errc()) throw SyntaxError("variable index out of range", start);
    pos_ = q;
    Token t{Tok::Var, start};
    t.var = idx;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// -------------------------------------------------------------------- Parsing

class Parser {
 public:
  Parser(std::string_view src, int d) : lex_(src), d_(d) { advance(); }

  Expr parse_all() {
    Expr e = expr();
    if (cur_.kind != Tok::End) throw SyntaxError("trailing input", cur_.offset);
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) throw SyntaxError(std::string("expected ") + what, cur_.offset);
    advance();
  }

  Expr expr() {
    Expr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const bool plus = cur_.kind == Tok::Plus;
      advance();
      Expr rhs = term();
      lhs = plus ? Expr::add(std::move(lhs), std::move(rhs)) : Expr::sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (cur_.kind == Tok::Star) {
      advance();
      Expr rhs = factor();
      if (lhs.kind() == Kind::Const) {
        lhs = Expr::scalar_mul(lhs.value(), std::move(rhs));
      } else {
        lhs = Expr::mul(std::move(lhs), std::move(rhs));
      }
    }
    return lhs;
  }

  Expr factor() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return Expr::constant(t.number);
      case Tok::Var:
        if (t.var < 1 || t.var > d_) throw UnknownVariable(t.var, t.offset);
        advance();
        return Expr::var(t.var);
      case Tok::LParen: {
        advance();
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Inv: {
        advance();
        expect(Tok::LParen, "'(' after inv");
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return Expr::inv(std::move(e));
      }
      case Tok::Minus:
        advance();
        return Expr::neg(factor());
      case Tok::End:
        throw SyntaxError("unexpected end of input", t.offset);
      default:
        throw SyntaxError("unexpected token", t.offset);
    }
  }

  Lexer lex_;
  int d_;
  Token cur_{Tok::End, 0};
};

// ------------------------------------------------------------------- Printing

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
      return 0;
    case Kind::Mul:
    case Kind::ScalarMul:
      return 1;
    default:
      return 2;
  }
}

// A literal the lexer can produce: nonnegative real or nonnegative imaginary.
bool is_literal(Complex c) {
  if (c.imag() == 0.0 && !std::signbit(c.real())) return true;
  return c.real() == 0.0 && !std::signbit(c.real()) && !std::signbit(c.imag());
}

std::string literal(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  return format_real(c.imag()) + "i";
}

// Text for an arbitrary complex constant; literals print bare, everything else
// as a parenthesized sum that evaluates to the same value.
std::string constant_text(Complex c) {
  if (is_literal(c)) return literal(c);
  std::string re = format_real(std::abs(c.real()));
  std::string im = format_real(std::abs(c.imag())) + "i";
  const bool re_neg = std::signbit(c.real());
  const bool im_neg = std::signbit(c.imag());
  if (c.imag() == 0.0) return "(-" + re + ")";
  if (c.real() == 0.0) return "(-" + im + ")";
  return std::string("(") + (re_neg ? "-" : "") + re + (im_neg ? " - " : " + ") + im + ")";
}

void print_to(const Expr& e, int min_prec, std::string& out);

void print_node(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Const:
      out += constant_text(e.value());
      break;
    case Kind::Var:
      out += "x" + std::to_string(e.index());
      break;
    case Kind::Add:
    case Kind::Sub:
      print_to(e.child(0), 0, out);
      out += e.kind() == Kind::Add ? " + " : " - ";
      print_to(e.child(1), 1, out);
      break;
    case Kind::Mul:
      print_to(e.child(0), 1, out);
      out += "*";
      print_to(e.child(1), 2, out);
      break;
    case Kind::ScalarMul:
      out += constant_text(e.value());
      out += "*";
      print_to(e.child(0), 2, out);
      break;
    case Kind::Neg:
      out += "-";
      print_to(e.child(0), 2, out);
      break;
    case Kind::Inv:
      out += "inv(";
      print_to(e.child(0), 0, out);
      out += ")";
      break;
  }
}

void print_to(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e.kind()) < min_prec) {
    out += "(";
    print_node(e, out);
    out += ")";
  } else {
    print_node(e, out);
  }
}

// ----------------------------------------------------------------- Evaluation

CMatrix eval_at(const Expr& e, const GradedPoint& x, std::vector<int>& path) {
  const int n = x.n();
  auto child = [&](int i) {
    path.push_back(i);
    CMatrix v = eval_at(e.child(i), x, path);
    path.pop_back();
    return v;
  };
  switch (e.kind()) {
    case Kind::Const:
      return e.value() * CMatrix::Identity(n, n);
    case Kind::Var:
      if (e.index() < 1 || e.index() > x.d()) throw ShapeMismatch("eval_expr: variable outside point arity");
      return x[e.index() - 1];
    case Kind::Add:
      return child(0) + child(1);
    case Kind::Sub:
      return child(0) - child(1);
    case Kind::Mul: {
      CMatrix a = child(0);
      return a * child(1);
    }
    case Kind::Neg:
      return -child(0);
    case Kind::ScalarMul:
      return e.value() * child(0);
    case Kind::Inv: {
      CMatrix a = child(0);
      try {
        return mat::inv(a).value;
      } catch (const SingularMatrix&) {
        throw SingularityHit(path);
      }
    }
  }
  throw Error("eval_expr: unknown node kind");
}

FreePoly expand(const Expr& e, int d) {
  switch (e.kind()) {
    case Kind::Const:
      return FreePoly::constant(d, e.value());
    case Kind::Var:
      if (e.index() < 1 || e.index() > d) throw UnknownVariable(e.index(), 0);
      return FreePoly::variable(d, e.index());
    case Kind::Add:
      return poly_add(expand(e.child(0), d), expand(e.child(1), d));
    case Kind::Sub:
      return poly_sub(expand(e.child(0), d), expand(e.child(1), d));
    case Kind::Mul:
      return poly_mul(expand(e.child(0), d), expand(e.child(1), d));
    case Kind::Neg:
      return poly_scale(-1.0, expand(e.child(0), d));
    case Kind::ScalarMul:
      return poly_scale(e.value(), expand(e.child(0), d));
    case Kind::Inv:
      throw NotPolynomial();
  }
  throw Error("to_free_poly: unknown node kind");
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_real: conversion failed");
  return std::string(buf, end);
}

Expr parse(std::string_view src, int d) { return Parser(src, d).parse_all(); }

std::string print(const Expr& e) {
  std::string out;
  print_to(e, 0, out);
  return out;
}

std::string poly_source(const FreePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    // Real and imaginary parts are printed separately so that the parsed
    // coefficient is bit-identical.
    std::string coeff;
    if (c.imag() == 0.0) {
      coeff = (std::signbit(c.real()) ? "-" : "") + format_real(std::abs(c.real()));
    } else if (c.real() == 0.0) {
      coeff = (std::signbit(c.imag()) ? "-" : "") + format_real(std::abs(c.imag())) + "i";
    } else {
      coeff = "(" + std::string(std::signbit(c.real()) ? "-" : "") + format_real(std::abs(c.real())) +
              (std::signbit(c.imag()) ? " - " : " + ") + format_real(std::abs(c.imag())) + "i)";
    }
    out += coeff;
    for (int r : w.letters) out += "*x" + std::to_string(r);
  }
  return out;
}

FreePoly to_free_poly(const Expr& e, int d) {
  if (e.has_inv()) throw NotPolynomial();
  return expand(e, d);
}

CMatrix eval_expr(const Expr& e, const GradedPoint& x) {
  std::vector<int> path;
  return eval_at(e, x, path);
}

EvalOutcome try_eval_expr(const Expr& e, const GradedPoint& x) {
  try {
    return {eval_expr(e, x), std::nullopt};
  } catch (const SingularityHit& hit) {
    return {std::nullopt, hit.path()};
  }
}

}  // namespace freeholo::expr
