#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wf/lifted.hpp"
#include "wf/noise.hpp"
#include "wf/rng.hpp"
#include "wf/solver.hpp"

using namespace wf;
using wf::testing::make_design_ensemble;
using wf::testing::make_perturbed_design;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("add_noise hits the target SNR exactly and stays zero-mean") {
  RngStream rng(1, 0);
  RVector y(500);
  for (int i = 0; i < 500; ++i) y[i] = 1.0 + rng.uniform();

  SUBCASE("infinite SNR is the identity") {
    const NoisyIntensity out = add_noise(y, kInf, NoiseDistribution::gaussian_real, 9);
    CHECK((out.y - y).norm() == 0.0);
    CHECK(std::isinf(out.spec.realized_snr_linear));
  }
  SUBCASE("exact post-scaling") {
    for (double db : {10.0, 25.0, 40.0}) {
      const NoisyIntensity out = add_noise(y, db, NoiseDistribution::gaussian_real, 9);
      CHECK(out.spec.realized_snr_linear ==
            doctest::Approx(std::pow(10.0, db / 10.0)).epsilon(1e-12));
      CHECK(y.squaredNorm() / (out.y - y).squaredNorm() ==
            doctest::Approx(std::pow(10.0, db / 10.0)).epsilon(1e-12));
    }
  }
  SUBCASE("deterministic in seed, distinct across seeds") {
    const NoisyIntensity a = add_noise(y, 20.0, NoiseDistribution::uniform_real, 3);
    const NoisyIntensity b = add_noise(y, 20.0, NoiseDistribution::uniform_real, 3);
    const NoisyIntensity c = add_noise(y, 20.0, NoiseDistribution::uniform_real, 4);
    CHECK((a.y - b.y).norm() == 0.0);
    CHECK((a.y - c.y).norm() > 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(add_noise(RVector::Zero(4), 20.0, NoiseDistribution::gaussian_real, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(add_noise(y, std::nan(""), NoiseDistribution::gaussian_real, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("noise draws are zero-mean at the million-sample scale") {
  RVector y = RVector::Constant(1000000, 5.0);
  const NoisyIntensity out = add_noise(y, 20.0, NoiseDistribution::gaussian_real, 77);
  const RVector eta = out.y - y;
  const double sigma = eta.norm() / std::sqrt(static_cast<double>(eta.size()));
  CHECK(std::abs(eta.mean()) <= 3.0 * sigma / std::sqrt(static_cast<double>(eta.size())));
}

TEST_CASE("noisy concentration bound: noiseless limit reduces to the residual check") {
  const SamplingEnsemble e = make_design_ensemble(5);
  RngStream rng(2, 0);
  const CVector x = rng.unit_vector(5);
  const ConcentrationCheck check = noisy_concentration_check(e, x, kInf, 1, 5, 0.0);
  CHECK(check.bound == doctest::Approx(0.0));
  CHECK(check.empirical_mean <= 1e-12);
  CHECK(check.holds);

  // With a supplied delta the noiseless bound is delta ||x||^2.
  const ConcentrationCheck with_delta = noisy_concentration_check(e, x, kInf, 1, 5, 0.07);
  CHECK(with_delta.bound == doctest::Approx(0.07 * x.squaredNorm()).epsilon(1e-12));
  CHECK(with_delta.holds);
}

TEST_CASE("noisy concentration bound holds on the exact design over 200 draws") {
  const SamplingEnsemble e = make_design_ensemble(5);
  RngStream rng(3, 0);
  const CVector x = rng.unit_vector(5);
  const double snr_db = 20.0;
  const ConcentrationCheck check = noisy_concentration_check(e, x, snr_db, 200, 11, 0.0);
  // At delta = 0 the bound is (2/sqrt(SNR)) ||x||^2; allow two standard errors.
  CHECK(check.bound == doctest::Approx(2.0 / std::sqrt(100.0)).epsilon(1e-12));
  CHECK(check.empirical_mean <= check.bound + 2.0 * check.standard_error);
  CHECK(check.holds);
}

TEST_CASE("noisy concentration bound is monotone decreasing in SNR") {
  double prev = kInf;
  for (int i = 0; i < 20; ++i) {
    const double db = 10.0 + 2.0 * i;
    const double bound = 0.07 + 2.07 / std::sqrt(std::pow(10.0, db / 10.0));
    CHECK(bound < prev);
    prev = bound;
  }
}

TEST_CASE("expected-error envelope limits") {
  const double delta = 0.0, snr_db = 40.0;
  const double dt = effective_delta_noisy(delta, std::pow(10.0, snr_db / 10.0));
  const CertificateReport rep = certificate_chain(dt);

  // Frozen from the chain at delta_tilde = 0.02.
  CHECK(rep.alpha_prime == doctest::Approx(1.4683888362373811).epsilon(1e-12));
  const double asymptote = rep.alpha_prime * 2.0 / 100.0;
  CHECK(asymptote == doctest::Approx(0.029367776724747).epsilon(1e-12));
  CHECK(expected_error_envelope(delta, snr_db, 1000000, rep) == doctest::Approx(asymptote));

  double prev = kInf;
  for (int k = 0; k <= 300; k += 10) {
    const double env = expected_error_envelope(delta, snr_db, k, rep);
    CHECK(env <= prev);
    CHECK(env >= asymptote);
    prev = env;
  }

  // Infinite SNR reduces to the noise-free envelope.
  const CertificateReport clean = certificate_chain(0.05);
  const double at_k = expected_error_envelope(0.05, kInf, 10, clean);
  CHECK(at_k == doctest::Approx(clean.epsilon *
                                std::pow(1.0 - 2.0 * clean.mu / clean.alpha_prime, 5.0))
                    .epsilon(1e-12));

  CHECK_THROWS_AS(expected_error_envelope(0.15, 10.0, 3, certificate_chain(0.15)), NumericalError);
}

TEST_CASE("expected-error envelope improves monotonically with SNR at fixed k") {
  for (int k : {0, 5, 50}) {
    double prev = kInf;
    for (double db = 25.0; db <= 60.0; db += 2.5) {
      const double dt = effective_delta_noisy(0.0, std::pow(10.0, db / 10.0));
      const double env = expected_error_envelope(0.0, db, k, certificate_chain(dt));
      CHECK(env < prev);
      prev = env;
    }
  }
}

TEST_CASE("noisy experiment reduces to noiseless statistics at infinite SNR") {
  const SamplingEnsemble e = make_design_ensemble(5);
  SolveOptions opts;
  opts.step_mode = StepMode::certified;
  opts.delta = 0.0;
  opts.max_iterations = 300;
  opts.stop_tolerance = 1e-9;
  const NoisySummary summary = noisy_experiment(e, {kInf}, 5, opts, 99);
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0].mean_rel_dist <= 1e-8);
  CHECK(summary.rows[0].envelope_asymptote == 0.0);
}

TEST_CASE("noisy experiment error scales like the inverse root SNR") {
  const SamplingEnsemble e = make_perturbed_design(7, 0.005, 42);
  const double delta = estimate_delta(e, 32, 150, 7).value;
  SolveOptions opts;
  opts.step_mode = StepMode::certified;
  opts.delta = delta;
  opts.max_iterations = 300;
  opts.stop_tolerance = 1e-9;
  const NoisySummary summary = noisy_experiment(e, {30.0, 42.0, 54.0}, 12, opts, 2024);
  REQUIRE(summary.rows.size() == 3);
  CHECK(summary.slope_fit >= 0.7);
  CHECK(summary.slope_fit <= 1.3);
  for (const NoisySummaryRow& row : summary.rows)
    CHECK(row.mean_rel_dist <= 3.0 * row.envelope_asymptote);
}
