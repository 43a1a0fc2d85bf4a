#include "wf/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wf/io.hpp"
#include "wf/rng.hpp"

namespace wf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnrBoundaryDelta = 0.184;  // the three-digit constant of the SNR floor

double delta_hat_of(double delta) { return rip_constant(delta, epsilon_from_delta(delta)); }

}  // namespace

double epsilon_from_delta(double delta) {
  require(delta >= 0.0 && delta < 0.5, "epsilon_from_delta: delta must lie in [0, 0.5)");
  const double root = std::sqrt(1.0 + 0.5 * delta);
  const double inner = (1.0 - 2.0 * delta) * root;
  const double eps2 = 1.0 + root - 2.0 * std::sqrt(inner);
  return std::sqrt(std::max(0.0, eps2));
}

double rip_constant(double delta, double epsilon) {
  require(delta >= 0.0, "rip_constant: delta must be non-negative");
  require(epsilon >= 0.0, "rip_constant: epsilon must be non-negative");
  if (delta == 0.0) return 0.0;
  const double p = (1.0 - epsilon) * (2.0 - epsilon);
  if (p <= 0.0) return kInf;
  return std::sqrt(2.0) * (2.0 + epsilon) / std::sqrt(p) * delta;
}

CertificateReport certificate_chain(double delta) {
  require(delta >= 0.0 && delta < 0.5, "certificate_chain: delta must lie in [0, 0.5)");
  CertificateReport rep;
  rep.delta = delta;
  rep.epsilon = epsilon_from_delta(delta);
  rep.h2 = 2.0 + rep.epsilon;
  const double p = (1.0 - rep.epsilon) * (2.0 - rep.epsilon);  // h1^2, signed
  if (p <= 0.0) {
    // epsilon >= 1: the lifted-distance lower bound degenerates and the chain
    // carries no information; only the invalid flag is meaningful.
    rep.h1 = 0.0;
    rep.delta_hat = kInf;
    rep.h = 0.0;
    rep.c = (1.0 + rep.epsilon) * (2.0 + rep.epsilon) * (2.0 + delta);
    rep.r = 0.0;
    rep.mu = 0.0;
    rep.alpha_prime = kInf;
    rep.beta_prime = kInf;
  } else {
    rep.h1 = std::sqrt(p);
    rep.delta_hat = rip_constant(delta, rep.epsilon);
    rep.h = (1.0 - rep.delta_hat) * p;
    rep.c = (1.0 + rep.epsilon) * (2.0 + rep.epsilon) * (2.0 + delta);
    rep.r = (rep.h / rep.c) * (rep.h / rep.c);
    rep.mu = rep.h / (rep.c * rep.c);
    rep.alpha_prime = 2.0 / rep.h;
    rep.beta_prime = 2.0 / rep.mu;
  }
  rep.snr_min_db = delta < kSnrBoundaryDelta
                       ? 20.0 * std::log10((2.0 + delta) / (kSnrBoundaryDelta - delta))
                       : kInf;
  rep.valid = delta <= delta_star() && rep.epsilon < 1.0 && rep.delta_hat < 1.0;
  return rep;
}

double delta_star() {
  static const double root = [] {
    double lo = 0.0;
    double hi = 0.4999;
    // delta_hat(0) = 0 and delta_hat is increasing, exceeding 1 before 0.5.
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (delta_hat_of(mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return root;
}

double effective_delta_noisy(double delta, double snr_linear) {
  require(delta >= 0.0 && delta < 0.5, "effective_delta_noisy: delta must lie in [0, 0.5)");
  require(snr_linear > 0.0, "effective_delta_noisy: SNR must be positive");
  if (std::isinf(snr_linear)) return delta;
  return delta + (2.0 + delta) / std::sqrt(snr_linear);
}

SnrFeasibility snr_feasibility(double delta, double snr_linear) {
  require(delta >= 0.0 && delta <= kSnrBoundaryDelta,
          "snr_feasibility: delta must lie in [0, 0.184]");
  require(snr_linear > 0.0, "snr_feasibility: SNR must be positive");
  SnrFeasibility out;
  if (std::isinf(snr_linear)) {  // noiseless limit
    const double eps = epsilon_from_delta(delta);
    const double dh = rip_constant(delta, eps);
    out.alpha_upper = kInf;
    out.gap = eps < 1.0 ? (1.0 - dh) * (1.0 - eps) * (2.0 - eps) : -kInf;
    out.feasible = eps < 1.0 && dh < 1.0;
    return out;
  }
  const double dt = effective_delta_noisy(delta, snr_linear);
  if (dt >= 0.5) {
    out.gap = -kInf;
    return out;
  }
  const double eps = epsilon_from_delta(dt);
  if (eps >= 1.0) {
    out.gap = -kInf;
    return out;
  }
  // epsilon is evaluated at the effective delta; the delta multiplier of the
  // RIC stays the noiseless one (the lifted model is independent of noise).
  const double sq = std::sqrt(snr_linear);
  const double dh = rip_constant(delta, eps);
  const double lhs = (1.0 + eps) * (2.0 + delta) / (eps * sq);
  const double rhs = (1.0 - dh) * (1.0 - eps) * (2.0 - eps);
  out.alpha_upper = eps * sq / ((1.0 + eps) * (2.0 + delta));
  out.gap = rhs - lhs;
  out.feasible = lhs < rhs;
  return out;
}

double concentration_gap(const SamplingEnsemble& ensemble, const CVector& unit_x) {
  require(unit_x.size() == ensemble.n(), "concentration_gap: dimension mismatch");
  const double nx = unit_x.norm();
  require(nx > 0.0, "concentration_gap: x must be nonzero");
  const CVector x = unit_x / nx;
  const RVector y = (ensemble.rows_h * x).cwiseAbs2();
  return std::abs(y.squaredNorm() / static_cast<double>(ensemble.m()) - 2.0);
}

DeltaEstimate estimate_delta(const SamplingEnsemble& ensemble, int restarts, int iterations,
                             std::uint64_t seed) {
  require(restarts >= 1, "estimate_delta: restarts must be positive");
  require(iterations >= 1, "estimate_delta: iterations must be positive");
  const Eigen::Index n = ensemble.n();
  const double m = static_cast<double>(ensemble.m());
  constexpr double kStep = 0.05;

  DeltaEstimate best;
  best.value = -1.0;
  for (int restart = 0; restart < restarts; ++restart) {
    RngStream rng(seed, static_cast<std::uint64_t>(restart));
    CVector x = rng.unit_vector(n);
    for (int it = 0; it <= iterations; ++it) {
      const CVector w = ensemble.rows_h * x;
      const RVector w2 = w.cwiseAbs2();
      const double q = w2.squaredNorm() / m;
      const double gap = std::abs(q - 2.0);
      if (gap > best.value) {
        best.value = gap;
        best.witness = x;
      }
      if (it == iterations) break;
      // Ascend (q-2)^2, the smooth square of the gap.
      const CVector grad = (4.0 * (q - 2.0) / m) *
                           (ensemble.rows_h.adjoint() * (w2.cast<Complex>().cwiseProduct(w)));
      CVector tangent = grad - x * Complex(x.dot(grad).real(), 0.0);
      const double tn = tangent.norm();
      if (tn < 1e-14) break;  // stationary point of the ascent
      x = (x + (kStep / tn) * tangent).normalized();
    }
  }
  return best;
}

std::string certificate_csv_row(const CertificateReport& report) {
  std::string row;
  for (double field : {report.delta, report.epsilon, report.delta_hat, report.h1, report.h2,
                       report.h, report.c, report.r, report.mu, report.alpha_prime,
                       report.beta_prime, report.snr_min_db}) {
    row += format_sig12(field);
    row += ',';
  }
  row += report.valid ? '1' : '0';
  return row;
}

std::vector<CertificateReport> certificate_grid(double start, double stop, int points) {
  require(points >= 2, "certificate_grid: need at least 2 points");
  require(start < stop, "certificate_grid: start must be below stop");
  std::vector<CertificateReport> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double d = start + (stop - start) * static_cast<double>(i) / (points - 1);
    rows.push_back(certificate_chain(d));
  }
  return rows;
}

}  // namespace wf
