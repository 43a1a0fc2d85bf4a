#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wf/certificates.hpp"
#include "wf/ensemble.hpp"
#include "wf/solver.hpp"
#include "wf/types.hpp"

namespace wf {

enum class NoiseDistribution { gaussian_real, uniform_real };

struct NoiseSpec {
  double snr_db_target = 0.0;
  double realized_snr_linear = 0.0;  // ||y_clean||^2 / ||eta||^2 after scaling
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::gaussian_real;
};

struct NoisyIntensity {
  RVector y;
  NoiseSpec spec;
};

/// Adds i.i.d. zero-mean noise on the intensities, rescaled after the draw so
/// the realized SNR matches the target exactly. snr_db = +inf returns the
/// clean vector. Negative noisy intensities are kept as-is.
NoisyIntensity add_noise(const RVector& y_clean, double snr_db, NoiseDistribution distribution,
                         std::uint64_t seed);

struct ConcentrationCheck {
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool holds = false;
  int trials = 0;
};

/// Monte Carlo check of the perturbed concentration bound
/// E ||Y - (xx^H + ||x||^2 I)|| <= (delta + (2+delta)/sqrt(SNR)) ||x||^2
/// over `trials` noise draws. When delta is not supplied it is estimated from
/// the ensemble (64 restarts).
ConcentrationCheck noisy_concentration_check(const SamplingEnsemble& ensemble, const CVector& x, double snr_db,
                               int trials, std::uint64_t seed,
                               std::optional<double> delta = std::nullopt);

/// Expected-error envelope at iteration k, in units of ||x||:
/// report.epsilon * (1 - 2 mu/alpha')^{k/2} + alpha' (2+delta)/sqrt(SNR).
/// `report` must be built from the noisy effective delta.
double expected_error_envelope(double delta, double snr_db, int k, const CertificateReport& report);

struct NoisySummaryRow {
  double snr_db = 0.0;
  int trials = 0;
  double mean_rel_dist = 0.0;
  double median_rel_dist = 0.0;
  double envelope_asymptote = 0.0;
};

struct NoisySummary {
  std::vector<NoisySummaryRow> rows;  // one per ladder point
  double slope_fit = 0.0;  // log-log slope of mean error vs 1/sqrt(SNR)
};

/// Noisy recovery experiment over an SNR ladder: `trials` solves per ladder
/// point on random unit truths, reporting mean/median final relative distance,
/// the expected-error asymptote, and the fitted error-vs-noise exponent.
/// opts.delta carries the ensemble's noise-free concentration constant; in
/// certified mode the step is re-derived per ladder point from the effective
/// delta. Deterministic in seed.
NoisySummary noisy_experiment(const SamplingEnsemble& ensemble,
                              const std::vector<double>& snr_db_ladder, int trials,
                              const SolveOptions& opts, std::uint64_t seed);

inline constexpr const char* kNoisyCsvHeader =
    "snr_db,trials,mean_rel_dist,median_rel_dist,envelope_asymptote,slope_fit";

}  // namespace wf
