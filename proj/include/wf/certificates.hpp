#pragma once

#include <cstdint>
#include <vector>

#include "wf/ensemble.hpp"
#include "wf/types.hpp"

namespace wf {

/// The deterministic certificate chain computed from a concentration constant
/// delta: spectral-initialization accuracy epsilon, local restricted isometry
/// constant delta_hat, lifted-distance bounds h1/h2, strong convexity modulus
/// h, Lipschitz constant c, contraction rate r, optimal step mu, the scale-free
/// regularity pair (alpha', beta'), and the SNR floor below which the chain
/// breaks. Fields are meaningful as stated only while epsilon < 1; `valid`
/// flags the exact-recovery regime delta <= delta_star().
struct CertificateReport {
  double delta = 0.0;
  double epsilon = 0.0;
  double delta_hat = 0.0;
  double h1 = 0.0;      // sqrt((1-eps)(2-eps))
  double h2 = 0.0;      // 2 + eps
  double h = 0.0;       // (1 - delta_hat) * h1^2
  double c = 0.0;       // (1+eps)(2+eps)(2+delta)
  double r = 0.0;       // (h/c)^2
  double mu = 0.0;      // h / c^2
  double alpha_prime = 0.0;  // 2 / h
  double beta_prime = 0.0;   // 2 / mu
  double snr_min_db = 0.0;   // 20 log10((2+delta)/(0.184-delta)), +inf past 0.184
  bool valid = false;
};

/// epsilon(delta) = sqrt(1 + sqrt(1+delta/2) - 2 sqrt((1-2 delta) sqrt(1+delta/2))).
/// Domain [0, 0.5); monotone non-decreasing.
double epsilon_from_delta(double delta);

/// Local RIC delta_hat = sqrt(2) (2+eps) / sqrt((1-eps)(2-eps)) * delta for an
/// independently chosen neighborhood radius eps (+inf once eps >= 1).
double rip_constant(double delta, double epsilon);

CertificateReport certificate_chain(double delta);

/// Root of delta_hat(delta) = 1 on (0, 0.5), bisection to 1e-9 absolute.
double delta_star();

/// delta_tilde = delta + (2+delta)/sqrt(SNR); accepts +inf as noiseless sentinel.
double effective_delta_noisy(double delta, double snr_linear);

struct SnrFeasibility {
  bool feasible = false;
  double alpha_upper = 0.0;  // bound on alpha ||x||^2
  double gap = 0.0;          // rhs - lhs of the two-sided step-size condition
};

/// Noisy-regime step-size feasibility: epsilon from delta_tilde, delta_hat with
/// the noisy epsilon but the noiseless delta multiplier.
SnrFeasibility snr_feasibility(double delta, double snr_linear);

/// g(x) = |(1/M) sum_m |a_m^H x|^4 - 2| for unit-norm x; its maximum over the
/// sphere is the uniform concentration constant of the ensemble.
double concentration_gap(const SamplingEnsemble& ensemble, const CVector& unit_x);

struct DeltaEstimate {
  double value = 0.0;
  CVector witness;  // unit-norm argmax candidate, g(witness) == value
};

/// Multistart projected gradient ascent on the sphere maximizing g(x)^2.
/// Returns the best value found (a lower bound on the true uniform delta) and
/// its witness; deterministic in seed, restarts run on independent streams.
DeltaEstimate estimate_delta(const SamplingEnsemble& ensemble, int restarts, int iterations,
                             std::uint64_t seed);

/// Certificate reports on a uniform delta grid (the data behind the curves).
std::vector<CertificateReport> certificate_grid(double start, double stop, int points);

inline constexpr const char* kCurveCsvHeader =
    "delta,epsilon,delta_hat,h1,h2,h,c,r,mu,alpha_prime,beta_prime,snr_min_db,valid";

/// One curve-export CSV row matching kCurveCsvHeader, floats at 12 digits.
std::string certificate_csv_row(const CertificateReport& report);

}  // namespace wf
