#pragma once

#include <string>
#include <vector>

#include "freeholo/exprlang.hpp"
#include "freeholo/ncpoint.hpp"
#include "freeholo/sampling.hpp"

namespace freeholo {

enum class BoundSource { Asserted, Sampled };

const char* to_string(BoundSource s);

struct InversionCertificate {
  /// p(z) = sum_k p[k] z^k, p(0) = 1, p(phi(M)) = 0.
  std::vector<Complex> p;
  /// Characteristic polynomial of phi(M), monic, ascending coefficients.
  std::vector<Complex> q;
  /// 1 - p(z) = c z prod_j (z - beta_j).
  Complex c;
  std::vector<Complex> roots;
  double sup_bound = 0.0;
  BoundSource source = BoundSource::Asserted;
  /// 2 |c| prod_j (B + |beta_j|).
  double bound_inv = 0.0;
  /// ||p(phi(M))||, for reporting.
  double annihilation = 0.0;
};

/// Certificate for phi(N)^{-1} on the domain where ||delta(N)|| < 1 and
/// ||2 p(phi(N))|| < 1. phi must be square-valued (dim_in == dim_out) and
/// bounded by sup_bound on G_delta. Throws NotInvertible when
/// sigma_min(phi(M)) <= 1e-10 sigma_max, RootFindingFailure when the
/// companion eigenvalues are not finite.
InversionCertificate inversion_certificate(const NcFunction& phi, const GradedPoint& m,
                                           const CMatrix& phi_m, double sup_bound,
                                           BoundSource source = BoundSource::Asserted);

/// Horner evaluation of sum_k coeffs[k] t^k.
CMatrix eval_scalar_poly(const std::vector<Complex>& coeffs, const CMatrix& t);

/// delta (+) 2 p(phi): membership needs both parts below 1.
class CompositeDomain {
 public:
  CompositeDomain(PolyMatrix delta, NcFunction phi, std::vector<Complex> p)
      : delta_(std::move(delta)), phi_(std::move(phi)), p_(std::move(p)) {}

  /// max(||delta(x)||, ||2 p(phi(x))||); infinity where phi is undefined.
  double norm(const GradedPoint& x) const;
  bool inside(const GradedPoint& x, double margin = kDefaultMargin) const {
    return norm(x) < 1.0 - margin;
  }
  const PolyMatrix& delta() const { return delta_; }
  const NcFunction& phi() const { return phi_; }

 private:
  PolyMatrix delta_;
  NcFunction phi_;
  std::vector<Complex> p_;
};

struct CertificateCheck {
  int samples = 0;
  int violations = 0;
  /// Largest ||phi(N)^{-1}|| seen.
  double worst = 0.0;
};

/// Counts samples with ||phi(N)^{-1}|| > bound_inv + slack among those inside
/// the composite domain.
CertificateCheck verify_certificate(const InversionCertificate& cert, const CompositeDomain& dom,
                                    const std::vector<GradedPoint>& samples, double slack = 1e-8);

/// Random points of the composite domain near M and M (+) M.
std::vector<GradedPoint> sample_certificate_domain(const CompositeDomain& dom, const GradedPoint& m,
                                                   int count, sampling::Rng& rng,
                                                   int max_tries = 200000);

/// Largest ||phi(x)|| over `count` random points of G_delta at levels 1..max_level.
/// The result is a heuristic estimate of sup ||phi||.
double sample_sup_bound(const NcFunction& phi, const PolyMatrix& delta, int count, int max_level,
                        sampling::Rng& rng);

struct ScanEntry {
  bool singular = false;
  std::vector<int> path;
  double norm = 0.0;
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  int flagged = 0;
  int total = 0;
  double max_norm = 0.0;
};

/// Evaluates the expression at every sample and records where it meets a
/// singular inversion.
ScanReport singular_scan(const expr::Expr& e, const std::vector<GradedPoint>& samples);

}  // namespace freeholo
