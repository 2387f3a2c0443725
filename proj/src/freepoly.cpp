#include "freeholo/freepoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace freeholo {

Word concat(const Word& a, const Word& b) {
  Word w;
  w.letters.reserve(a.letters.size() + b.letters.size());
  w.letters.insert(w.letters.end(), a.letters.begin(), a.letters.end());
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

bool GradedLex::operator()(const Word& a, const Word& b) const {
  if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
  return a.letters < b.letters;
}

// ---------------------------------------------------------------- GradedPoint

GradedPoint::GradedPoint(std::vector<CMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw ShapeMismatch("GradedPoint: need at least one matrix");
  n_ = static_cast<int>(mats_.front().rows());
  if (n_ < 1) throw ShapeMismatch("GradedPoint: level must be at least 1");
  for (const auto& m : mats_) {
    if (m.rows() != n_ || m.cols() != n_) {
      throw ShapeMismatch("GradedPoint: matrices must be square of one common size");
    }
    if (!mat::all_finite(m)) throw SchemaError("GradedPoint: non-finite entry");
  }
}

GradedPoint GradedPoint::scalar(const std::vector<Complex>& z) {
  std::vector<CMatrix> mats;
  mats.reserve(z.size());
  for (Complex c : z) mats.push_back(CMatrix::Constant(1, 1, c));
  return GradedPoint(std::move(mats));
}

// ------------------------------------------------------------------- FreePoly

FreePoly::FreePoly(int d, Terms terms) : d_(d), terms_(std::move(terms)) { normalize(); }

void FreePoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    for (int r : it->first.letters) {
      if (r < 1 || r > d_) {
        throw SchemaError("FreePoly: letter " + std::to_string(r) + " outside 1.." +
                          std::to_string(d_));
      }
    }
    if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
      throw SchemaError("FreePoly: non-finite coefficient");
    }
    if (std::abs(it->second) < kPurge) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

FreePoly FreePoly::constant(int d, Complex c) { return monomial(d, Word{}, c); }

FreePoly FreePoly::variable(int d, int r) { return monomial(d, Word{{r}}, 1.0); }

FreePoly FreePoly::monomial(int d, Word w, Complex c) {
  Terms t;
  t.emplace(std::move(w), c);
  return FreePoly(d, std::move(t));
}

int FreePoly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.degree());
}

int FreePoly::min_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.begin()->first.degree());
}

Complex FreePoly::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex{} : it->second;
}

bool FreePoly::operator==(const FreePoly& other) const {
  return d_ == other.d_ && terms_ == other.terms_;
}

namespace {

void require_same_d(const FreePoly& p, const FreePoly& q) {
  if (p.d() != q.d()) throw ShapeMismatch("free polynomials over different letter counts");
}

}  // namespace

FreePoly poly_add(const FreePoly& p, const FreePoly& q) {
  require_same_d(p, q);
  FreePoly::Terms t = p.terms();
  for (const auto& [w, c] : q.terms()) t[w] += c;
  return FreePoly(p.d(), std::move(t));
}

FreePoly poly_sub(const FreePoly& p, const FreePoly& q) {
  return poly_add(p, poly_scale(-1.0, q));
}

FreePoly poly_mul(const FreePoly& p, const FreePoly& q) {
  require_same_d(p, q);
  FreePoly::Terms t;
  for (const auto& [wa, ca] : p.terms()) {
    for (const auto& [wb, cb] : q.terms()) t[concat(wa, wb)] += ca * cb;
  }
  return FreePoly(p.d(), std::move(t));
}

FreePoly poly_scale(Complex c, const FreePoly& p) {
  FreePoly::Terms t = p.terms();
  for (auto& [w, coeff] : t) coeff *= c;
  return FreePoly(p.d(), std::move(t));
}

FreePoly poly_compose_linear(const FreePoly& p, const CMatrix& coeffs, const CVector& shift) {
  if (coeffs.rows() != p.d() || shift.size() != p.d()) {
    throw ShapeMismatch("poly_compose_linear: substitution has wrong size");
  }
  const int d_new = static_cast<int>(coeffs.cols());
  std::vector<FreePoly> images;
  images.reserve(static_cast<std::size_t>(p.d()));
  for (int r = 0; r < p.d(); ++r) {
    FreePoly img = FreePoly::constant(d_new, shift(r));
    for (int s = 0; s < d_new; ++s) {
      img = poly_add(img, poly_scale(coeffs(r, s), FreePoly::variable(d_new, s + 1)));
    }
    images.push_back(std::move(img));
  }
  FreePoly out(d_new);
  for (const auto& [w, c] : p.terms()) {
    FreePoly term = FreePoly::constant(d_new, c);
    for (int r : w.letters) term = poly_mul(term, images[static_cast<std::size_t>(r - 1)]);
    out = poly_add(out, term);
  }
  return out;
}

std::string to_string(const FreePoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (int r : w.letters) os << "*x" << r;
  }
  return os.str();
}

CMatrix eval_word(const Word& w, const GradedPoint& x) {
  CMatrix out = CMatrix::Identity(x.n(), x.n());
  for (int r : w.letters) {
    if (r < 1 || r > x.d()) throw ShapeMismatch("eval_word: letter outside point arity");
    out = out * x[r - 1];
  }
  return out;
}

CMatrix eval_poly(const FreePoly& p, const GradedPoint& x) {
  if (p.d() != x.d()) throw ShapeMismatch("eval_poly: polynomial and point arity differ");
  CMatrix out = CMatrix::Zero(x.n(), x.n());
  WordCache cache(x);
  for (const auto& [w, c] : p.terms()) out += c * cache.value(w);
  return out;
}

const CMatrix& WordCache::value(const Word& w) {
  auto it = memo_.find(w);
  if (it != memo_.end()) return it->second;
  CMatrix v;
  if (w.empty()) {
    v = CMatrix::Identity(x_.n(), x_.n());
  } else {
    const int last = w.letters.back();
    if (last < 1 || last > x_.d()) throw ShapeMismatch("eval_word: letter outside point arity");
    Word prefix{std::vector<int>(w.letters.begin(), w.letters.end() - 1)};
    v = value(prefix) * x_[last - 1];
  }
  return memo_.emplace(w, std::move(v)).first->second;
}

// ----------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(int rows, int cols, int d, std::vector<FreePoly> entries)
    : rows_(rows), cols_(cols), d_(d), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != entries_.size()) {
    throw ShapeMismatch("PolyMatrix: entry count does not match shape");
  }
  for (const auto& e : entries_) {
    if (e.d() != d) throw ShapeMismatch("PolyMatrix: entries disagree on d");
  }
}

PolyMatrix PolyMatrix::scalar(const FreePoly& p) { return PolyMatrix(1, 1, p.d(), {p}); }

int PolyMatrix::degree() const {
  int deg = -1;
  for (const auto& e : entries_) deg = std::max(deg, e.degree());
  return deg;
}

int PolyMatrix::min_degree() const {
  int deg = -1;
  for (const auto& e : entries_) {
    if (e.is_zero()) continue;
    deg = deg < 0 ? e.min_degree() : std::min(deg, e.min_degree());
  }
  return deg;
}

CMatrix PolyMatrix::word_coefficients(const Word& w) const {
  CMatrix out(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).coefficient(w);
  }
  return out;
}

std::vector<Word> PolyMatrix::support() const {
  std::set<Word, GradedLex> words;
  for (const auto& e : entries_) {
    for (const auto& [w, c] : e.terms()) words.insert(w);
  }
  return {words.begin(), words.end()};
}

CMatrix eval_poly_matrix(const PolyMatrix& delta, const GradedPoint& x) {
  if (delta.d() != x.d()) throw ShapeMismatch("eval_poly_matrix: arity differs");
  const int n = x.n();
  CMatrix out = CMatrix::Zero(delta.rows() * n, delta.cols() * n);
  WordCache cache(x);
  for (int i = 0; i < delta.rows(); ++i) {
    for (int j = 0; j < delta.cols(); ++j) {
      auto blk = out.block(i * n, j * n, n, n);
      for (const auto& [w, c] : delta(i, j).terms()) blk += c * cache.value(w);
    }
  }
  return out;
}

PolyMatrix delta_direct_sum(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.d() != b.d()) throw ShapeMismatch("delta_direct_sum: arity differs");
  const int rows = a.rows() + b.rows();
  const int cols = a.cols() + b.cols();
  std::vector<FreePoly> entries(static_cast<std::size_t>(rows * cols), FreePoly(a.d()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) entries[static_cast<std::size_t>(i * cols + j)] = a(i, j);
  }
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      entries[static_cast<std::size_t>((a.rows() + i) * cols + a.cols() + j)] = b(i, j);
    }
  }
  return PolyMatrix(rows, cols, a.d(), std::move(entries));
}

PolyMatrix delta_scale(const PolyMatrix& delta, Complex c) {
  std::vector<FreePoly> entries;
  entries.reserve(delta.entries().size());
  for (const auto& e : delta.entries()) entries.push_back(poly_scale(c, e));
  return PolyMatrix(delta.rows(), delta.cols(), delta.d(), std::move(entries));
}

PolyMatrix delta_pad_columns(const PolyMatrix& delta, int extra) {
  const int cols = delta.cols() + extra;
  std::vector<FreePoly> entries(static_cast<std::size_t>(delta.rows() * cols), FreePoly(delta.d()));
  for (int i = 0; i < delta.rows(); ++i) {
    for (int j = 0; j < delta.cols(); ++j) {
      entries[static_cast<std::size_t>(i * cols + j)] = delta(i, j);
    }
  }
  return PolyMatrix(delta.rows(), cols, delta.d(), std::move(entries));
}

PolyMatrix delta_strip_zero_columns(const PolyMatrix& delta) {
  int keep = delta.cols();
  while (keep > 0) {
    bool zero = true;
    for (int i = 0; i < delta.rows() && zero; ++i) zero = delta(i, keep - 1).is_zero();
    if (!zero) break;
    --keep;
  }
  std::vector<FreePoly> entries;
  for (int i = 0; i < delta.rows(); ++i) {
    for (int j = 0; j < keep; ++j) entries.push_back(delta(i, j));
  }
  return PolyMatrix(delta.rows(), keep, delta.d(), std::move(entries));
}

namespace deltas {

PolyMatrix variable(int d, int r) { return PolyMatrix::scalar(FreePoly::variable(d, r)); }

PolyMatrix ball(const std::vector<Complex>& center, double eps) {
  const int d = static_cast<int>(center.size());
  std::vector<FreePoly> entries;
  for (int r = 0; r < d; ++r) {
    FreePoly e = poly_sub(FreePoly::variable(d, r + 1), FreePoly::constant(d, center[static_cast<std::size_t>(r)]));
    entries.push_back(poly_scale(1.0 / eps, e));
  }
  return PolyMatrix(d, 1, d, std::move(entries));
}

PolyMatrix row_ball(int d) {
  std::vector<FreePoly> entries;
  for (int r = 1; r <= d; ++r) entries.push_back(FreePoly::variable(d, r));
  return PolyMatrix(1, d, d, std::move(entries));
}

PolyMatrix polydisk(int d) {
  std::vector<FreePoly> entries(static_cast<std::size_t>(d * d), FreePoly(d));
  for (int r = 0; r < d; ++r) entries[static_cast<std::size_t>(r * d + r)] = FreePoly::variable(d, r + 1);
  return PolyMatrix(d, d, d, std::move(entries));
}

PolyMatrix commutator() {
  FreePoly x1 = FreePoly::variable(2, 1);
  FreePoly x2 = FreePoly::variable(2, 2);
  FreePoly comm = poly_sub(poly_mul(x1, x2), poly_mul(x2, x1));
  FreePoly delta = poly_sub(FreePoly::constant(2, 1.0), poly_mul(comm, comm));
  return PolyMatrix::scalar(delta);
}

}  // namespace deltas

}  // namespace freeholo
