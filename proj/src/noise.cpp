#include "wf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wf/lifted.hpp"
#include "wf/rng.hpp"

namespace wf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snr_db_to_linear(double snr_db) {
  return std::isinf(snr_db) ? kInf : std::pow(10.0, snr_db / 10.0);
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

NoisyIntensity add_noise(const RVector& y_clean, double snr_db, NoiseDistribution distribution,
                         std::uint64_t seed) {
  require(std::isfinite(snr_db) || std::isinf(snr_db), "add_noise: SNR target must not be NaN");
  const double clean_energy = y_clean.squaredNorm();
  require(clean_energy > 0.0, "add_noise: clean signal must be nonzero");

  NoisyIntensity out;
  out.spec.snr_db_target = snr_db;
  out.spec.seed = seed;
  out.spec.distribution = distribution;
  if (std::isinf(snr_db)) {
    out.y = y_clean;
    out.spec.realized_snr_linear = kInf;
    return out;
  }

  RngStream rng(seed, 0);
  RVector eta(y_clean.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    eta[i] = distribution == NoiseDistribution::gaussian_real ? rng.normal()
                                                              : rng.uniform(-1.0, 1.0);
  const double eta_norm = eta.norm();
  require(eta_norm > 0.0, "add_noise: degenerate noise draw");
  // Exact post-scaling: realized SNR equals the target, so the noise level is a
  // controlled experimental variable rather than an expectation.
  const double snr_linear = snr_db_to_linear(snr_db);
  eta *= std::sqrt(clean_energy / snr_linear) / eta_norm;
  out.y = y_clean + eta;
  out.spec.realized_snr_linear = clean_energy / eta.squaredNorm();
  return out;
}

ConcentrationCheck noisy_concentration_check(const SamplingEnsemble& ensemble, const CVector& x, double snr_db,
                               int trials, std::uint64_t seed, std::optional<double> delta) {
  require(trials >= 1, "noisy_concentration_check: trials must be positive");
  const double xnorm2 = x.squaredNorm();
  require(xnorm2 > 0.0, "noisy_concentration_check: x must be nonzero");
  const double d = delta ? *delta : estimate_delta(ensemble, 64, 200, seed ^ 0xD17AULL).value;
  const double snr_linear = snr_db_to_linear(snr_db);

  ConcentrationCheck out;
  out.bound = (d + (std::isinf(snr_linear) ? 0.0 : (2.0 + d) / std::sqrt(snr_linear))) * xnorm2;
  const RVector y_clean = forward_intensity(ensemble, x);
  CMatrix lifted_truth = x * x.adjoint();
  lifted_truth.diagonal().array() += xnorm2;

  if (std::isinf(snr_linear)) {  // noiseless limit: a single deterministic residual
    out.trials = 1;
    out.empirical_mean = hermitian_spectral_norm(spectral_matrix(ensemble, y_clean).matrix -
                                                 lifted_truth);
    out.standard_error = 0.0;
    out.holds = out.empirical_mean <= out.bound + 1e-12;
    return out;
  }

  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const NoisyIntensity noisy =
        add_noise(y_clean, snr_db, NoiseDistribution::gaussian_real, derive_seed(seed, t));
    const double lhs =
        hermitian_spectral_norm(spectral_matrix(ensemble, noisy.y).matrix - lifted_truth);
    sum += lhs;
    sum_sq += lhs * lhs;
  }
  out.trials = trials;
  out.empirical_mean = sum / trials;
  const double var = std::max(0.0, sum_sq / trials - out.empirical_mean * out.empirical_mean);
  out.standard_error = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
  out.holds = out.empirical_mean <= out.bound;
  return out;
}

double expected_error_envelope(double delta, double snr_db, int k, const CertificateReport& report) {
  require(k >= 0, "expected_error_envelope: iteration index must be non-negative");
  const double snr_linear = snr_db_to_linear(snr_db);
  if (!snr_feasibility(delta, snr_linear).feasible)
    throw NumericalError("expected_error_envelope: (delta, SNR) pair is infeasible");
  const double rate = 1.0 - 2.0 * report.mu / report.alpha_prime;
  const double floor =
      std::isinf(snr_linear) ? 0.0
                             : report.alpha_prime * (2.0 + delta) / std::sqrt(snr_linear);
  return report.epsilon * std::pow(rate, 0.5 * k) + floor;
}

NoisySummary noisy_experiment(const SamplingEnsemble& ensemble,
                              const std::vector<double>& snr_db_ladder, int trials,
                              const SolveOptions& opts, std::uint64_t seed) {
  require(!snr_db_ladder.empty(), "noisy_experiment: empty SNR ladder");
  require(trials >= 1, "noisy_experiment: trials must be positive");

  NoisySummary summary;
  std::vector<double> inv_sqrt_snr, mean_err;
  for (std::size_t ladder = 0; ladder < snr_db_ladder.size(); ++ladder) {
    const double snr_db = snr_db_ladder[ladder];
    const double snr_linear = snr_db_to_linear(snr_db);
    const double dt = effective_delta_noisy(opts.delta, snr_linear);
    const CertificateReport noisy_report = certificate_chain(dt);

    SolveOptions run_opts = opts;
    if (opts.step_mode == StepMode::certified) run_opts.delta = dt;

    std::vector<double> rel_dist(trials);
    for (int t = 0; t < trials; ++t) {
      RngStream rng(seed, ladder * static_cast<std::uint64_t>(trials) + t);
      const CVector x = rng.unit_vector(ensemble.n());
      const RVector y_clean = forward_intensity(ensemble, x);
      const NoisyIntensity noisy = add_noise(y_clean, snr_db, NoiseDistribution::gaussian_real,
                                             derive_seed(seed ^ 0xE7A0ULL, ladder * trials + t));
      const SolveTrace trace = solve(ensemble, noisy.y, run_opts, x);
      rel_dist[t] = distance(trace.final_estimate, x) / x.norm();
    }

    NoisySummaryRow row;
    row.snr_db = snr_db;
    row.trials = trials;
    row.mean_rel_dist =
        std::accumulate(rel_dist.begin(), rel_dist.end(), 0.0) / static_cast<double>(trials);
    row.median_rel_dist = median_of(rel_dist);
    row.envelope_asymptote =
        std::isinf(snr_linear)
            ? 0.0
            : noisy_report.alpha_prime * (2.0 + opts.delta) / std::sqrt(snr_linear);
    summary.rows.push_back(row);
    if (!std::isinf(snr_linear) && row.mean_rel_dist > 0.0) {
      inv_sqrt_snr.push_back(-0.5 * std::log(snr_linear));  // log(1/sqrt(SNR))
      mean_err.push_back(std::log(row.mean_rel_dist));
    }
  }

  // log-log slope of mean error against 1/sqrt(SNR); ~1 when the error floor
  // scales like the envelope asymptote.
  if (inv_sqrt_snr.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < inv_sqrt_snr.size(); ++i) {
      mx += inv_sqrt_snr[i];
      my += mean_err[i];
    }
    mx /= inv_sqrt_snr.size();
    my /= inv_sqrt_snr.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < inv_sqrt_snr.size(); ++i) {
      num += (inv_sqrt_snr[i] - mx) * (mean_err[i] - my);
      den += (inv_sqrt_snr[i] - mx) * (inv_sqrt_snr[i] - mx);
    }
    summary.slope_fit = den > 0.0 ? num / den : 0.0;
  }
  return summary;
}

}  // namespace wf
