#include "freeholo/ncpoint.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace freeholo {

NcFunction poly_function(FreePoly p) {
  return NcFunction{[p = std::move(p)](const GradedPoint& x) { return eval_poly(p, x); }, 1, 1};
}

GradedPoint point_direct_sum(const GradedPoint& x, const GradedPoint& y) {
  if (x.d() != y.d()) throw ShapeMismatch("point_direct_sum: arity differs");
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(x.d()));
  for (int r = 0; r < x.d(); ++r) mats.push_back(mat::direct_sum(x[r], y[r]));
  return GradedPoint(std::move(mats));
}

GradedPoint conjugate(const GradedPoint& x, const CMatrix& s) {
  if (s.rows() != x.n() || s.cols() != x.n()) throw ShapeMismatch("conjugate: size differs from level");
  const CMatrix si = mat::inv(s).value;
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(x.d()));
  for (const auto& m : x.mats()) mats.push_back(si * m * s);
  return GradedPoint(std::move(mats));
}

GradedPoint upper_triangular_point(const GradedPoint& top, const GradedPoint& bottom,
                                   const CMatrix& c) {
  if (top.d() != bottom.d() || top.n() != bottom.n()) {
    throw ShapeMismatch("upper_triangular_point: points differ in shape");
  }
  const int n = top.n();
  if (c.rows() != n || c.cols() != n) throw ShapeMismatch("upper_triangular_point: C has wrong size");
  std::vector<CMatrix> mats;
  for (int r = 0; r < top.d(); ++r) {
    CMatrix m = CMatrix::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n) = top[r];
    m.topRightCorner(n, n) = top[r] * c - c * bottom[r];
    m.bottomRightCorner(n, n) = bottom[r];
    mats.push_back(std::move(m));
  }
  return GradedPoint(std::move(mats));
}

bool is_scalar_tuple(const GradedPoint& x, double tol) {
  for (const auto& m : x.mats()) {
    const Complex a = m(0, 0);
    CMatrix diff = m - a * CMatrix::Identity(x.n(), x.n());
    if (mat::max_abs(diff) > tol) return false;
  }
  return true;
}

Membership in_gdelta(const PolyMatrix& delta, const GradedPoint& x, double margin) {
  const double nrm = mat::op_norm(eval_poly_matrix(delta, x));
  Verdict v = Verdict::Outside;
  if (nrm < 1.0 - margin) {
    v = Verdict::Inside;
  } else if (std::abs(nrm - 1.0) <= margin) {
    v = Verdict::Boundary;
  }
  return {v, 1.0 - nrm, nrm};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "Inside";
    case Verdict::Boundary: return "Boundary";
    case Verdict::Outside: return "Outside";
  }
  return "?";
}

namespace {

GradedPoint block_sum(const std::vector<GradedPoint>& blocks) {
  if (blocks.empty()) throw ShapeMismatch("similarity witness has no blocks");
  GradedPoint acc = blocks.front();
  for (std::size_t k = 1; k < blocks.size(); ++k) acc = point_direct_sum(acc, blocks[k]);
  return acc;
}

}  // namespace

bool envelope_member(const GradedPoint& x, const SimilarityWitness& w) {
  GradedPoint m = block_sum(w.blocks);
  if (m.n() != x.n() || m.d() != x.d()) return false;
  if (w.s.rows() != x.n() || w.s.cols() != x.n()) return false;
  mat::Inverse si;
  try {
    si = mat::inv(w.s);
  } catch (const SingularMatrix&) {
    return false;
  }
  double scale = 1.0;
  for (const auto& xm : x.mats()) scale = std::max(scale, mat::op_norm(xm));
  const double tol = 1e-8 * si.cond * scale;
  for (int r = 0; r < x.d(); ++r) {
    CMatrix diff = si.value * m[r] * w.s - x[r];
    if (mat::op_norm(diff) > tol) return false;
  }
  return true;
}

CMatrix extend_function(const std::vector<CMatrix>& f_on_blocks, const SimilarityWitness& w,
                        int dim_h, int dim_k) {
  if (f_on_blocks.size() != w.blocks.size()) throw ShapeMismatch("extend_function: block count differs");
  CMatrix sum(0, 0);
  for (std::size_t k = 0; k < f_on_blocks.size(); ++k) {
    const auto n = w.blocks[k].n();
    if (f_on_blocks[k].rows() != n * dim_k || f_on_blocks[k].cols() != n * dim_h) {
      throw ShapeMismatch("extend_function: block value has wrong shape");
    }
    sum = mat::direct_sum(sum, f_on_blocks[k]);
  }
  if (w.s.rows() * dim_k != sum.rows()) throw ShapeMismatch("extend_function: S has wrong size");
  const CMatrix si = mat::inv(w.s).value;
  const CMatrix id_k = CMatrix::Identity(dim_k, dim_k);
  const CMatrix id_h = CMatrix::Identity(dim_h, dim_h);
  return mat::kron(si, id_k) * sum * mat::kron(w.s, id_h);
}

CMatrix nc_derivative(const NcFunction& f, const GradedPoint& m, const GradedPoint& e) {
  if (m.d() != e.d() || m.n() != e.n()) throw ShapeMismatch("nc_derivative: direction shape differs");
  const int n = m.n();
  std::vector<CMatrix> mats;
  for (int r = 0; r < m.d(); ++r) {
    CMatrix b = CMatrix::Zero(2 * n, 2 * n);
    b.topLeftCorner(n, n) = m[r];
    b.topRightCorner(n, n) = e[r];
    b.bottomRightCorner(n, n) = m[r];
    mats.push_back(std::move(b));
  }
  const CMatrix v = f(GradedPoint(std::move(mats)));
  return v.block(0, n * f.dim_in, n * f.dim_out, n * f.dim_in);
}

namespace {

std::optional<CMatrix> try_eval(const NcFunction& f, const GradedPoint& x) {
  try {
    return f(x);
  } catch (const MathError&) {
    return std::nullopt;
  }
}

}  // namespace

NcAxiomReport check_nc_axioms(const NcFunction& f, const std::vector<GradedPoint>& samples,
                              const std::vector<CMatrix>& sims, const NcAxiomOptions& opts) {
  NcAxiomReport rep;
  rep.threshold = opts.threshold;
  const CMatrix id_h = CMatrix::Identity(f.dim_in, f.dim_in);
  const CMatrix id_k = CMatrix::Identity(f.dim_out, f.dim_out);

  std::vector<std::optional<CMatrix>> values;
  values.reserve(samples.size());
  for (const auto& x : samples) values.push_back(try_eval(f, x));

  // Direct sums: consecutive pairs first, then further offsets.
  const int count = static_cast<int>(samples.size());
  int pairs = 0;
  for (int offset = 0; offset < count && pairs < opts.max_pairs; ++offset) {
    for (int i = 0; i < count && pairs < opts.max_pairs; ++i) {
      const int j = (i + offset) % count;
      if (!values[i] || !values[j]) {
        ++rep.skipped;
        continue;
      }
      auto joint = try_eval(f, point_direct_sum(samples[i], samples[j]));
      if (!joint) {
        ++rep.skipped;
        continue;
      }
      const CMatrix expect = mat::direct_sum(*values[i], *values[j]);
      const double raw = mat::op_norm(*joint - expect);
      const double scale = std::max({1.0, mat::op_norm(expect)});
      rep.direct_sum_raw = std::max(rep.direct_sum_raw, raw);
      rep.direct_sum = std::max(rep.direct_sum, raw / scale);
      ++rep.direct_sum_checks;
      ++pairs;
    }
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!values[i]) continue;
    const auto& x = samples[i];
    for (const auto& s : sims) {
      if (s.rows() != x.n()) continue;
      mat::Inverse si;
      try {
        si = mat::inv(s);
      } catch (const SingularMatrix&) {
        continue;
      }
      auto conj = try_eval(f, conjugate(x, s));
      if (!conj) {
        ++rep.skipped;
        continue;
      }
      const CMatrix expect = mat::kron(si.value, id_k) * (*values[i]) * mat::kron(s, id_h);
      const double raw = mat::op_norm(*conj - expect);
      const double scale =
          si.cond * std::max({1.0, mat::op_norm(*values[i]), mat::op_norm(*conj)});
      rep.similarity_raw = std::max(rep.similarity_raw, raw);
      rep.similarity = std::max(rep.similarity, raw / scale);
      ++rep.similarity_checks;
    }
  }

  // Upper-triangular identity f([[N, NC - CM], [0, M]]) for same-level pairs.
  // Each sample is paired with the next one of the same level (or itself).
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t j = i;
    for (std::size_t step = 1; step < samples.size(); ++step) {
      const std::size_t cand = (i + step) % samples.size();
      if (samples[cand].n() == samples[i].n()) {
        j = cand;
        break;
      }
    }
    if (!values[i] || !values[j]) continue;
    const int n = samples[i].n();
    for (const auto& c : sims) {
      if (c.rows() != n) continue;
      auto tri = try_eval(f, upper_triangular_point(samples[i], samples[j], c));
      if (!tri) {
        ++rep.skipped;
        continue;
      }
      const CMatrix& fn = *values[i];
      const CMatrix& fm = *values[j];
      CMatrix expect = CMatrix::Zero(tri->rows(), tri->cols());
      expect.topLeftCorner(fn.rows(), fn.cols()) = fn;
      expect.topRightCorner(fn.rows(), fm.cols()) = fn * mat::kron(c, id_h) - mat::kron(c, id_k) * fm;
      expect.bottomRightCorner(fm.rows(), fm.cols()) = fm;
      CMatrix s = CMatrix::Identity(2 * n, 2 * n);
      s.topRightCorner(n, n) = c;
      const double cond = mat::condition_number(s);
      const double raw = mat::op_norm(*tri - expect);
      const double scale = cond * std::max({1.0, mat::op_norm(fn), mat::op_norm(fm)});
      rep.block_identity_raw = std::max(rep.block_identity_raw, raw);
      rep.block_identity = std::max(rep.block_identity, raw / scale);
      ++rep.block_identity_checks;
    }
  }

  rep.pass = rep.direct_sum <= opts.threshold && rep.similarity <= opts.threshold &&
             rep.block_identity <= opts.threshold;
  return rep;
}

}  // namespace freeholo
