#pragma once

#include <optional>
#include <vector>

#include "wf/certificates.hpp"
#include "wf/ensemble.hpp"
#include "wf/lifted.hpp"
#include "wf/types.hpp"

namespace wf {

enum class StepMode {
  certified,       // mu(delta) = h/c^2 from the certificate chain
  fixed,           // caller-supplied constant mu
  heuristic_ramp,  // mu_k = min(1 - exp(-k/tau), mu_max)
};

enum class StepNorm {
  initial_energy,  // divide the step by ||z0||^2 (the update rule as written)
  truth_energy,    // divide by ||x||^2 (the approximation used in the noisy proof)
};

struct SolveOptions {
  StepMode step_mode = StepMode::heuristic_ramp;
  double delta = 0.0;    // certified mode
  double mu = 0.1;       // fixed mode
  double mu_max = 0.2;   // ramp mode
  double tau = 330.0;    // ramp mode
  int max_iterations = 5000;
  double stop_tolerance = 1e-10;
  double power_iter_tolerance = 1e-10;
  int power_iter_cap = 5000;
  StepNorm step_norm = StepNorm::initial_energy;
};

struct TracePoint {
  int k = 0;
  double objective = 0.0;
  std::optional<double> dist_to_truth;
  double step = 0.0;  // mu_k used to produce the *next* iterate (0 on the last row)
};

struct SolveTrace {
  std::vector<TracePoint> iterates;
  CVector final_estimate;
  bool converged = false;
  std::optional<double> empirical_rate;  // fitted contraction factor of dist^2
};

/// dist(z, x) = sqrt(max(0, ||z||^2 + ||x||^2 - 2 |<z,x>|)); global-phase
/// invariant in either argument.
double distance(const CVector& z, const CVector& x);

struct PhaseAlignment {
  double phi = 0.0;       // in [0, 2pi)
  CVector aligned_truth;  // x e^{j phi}, the closest point of the solution set
  bool degenerate = false;  // <z, x> == 0: every phase is a minimizer
};

PhaseAlignment phase_align(const CVector& z, const CVector& x);

/// f(z) = (1/2M) sum_m (y_m - |a_m^H z|^2)^2.
double intensity_objective(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z);

/// Wirtinger gradient (1/M) sum_m (|a_m^H z|^2 - y_m) a_m a_m^H z. The
/// conjugate-cogradient scaling is fixed so that the directional derivative of
/// f along d equals 2 Re<grad, d>.
CVector wirtinger_gradient(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z);

struct InitResult {
  CVector z0;
  SpectralEstimate estimate;  // leading pair filled
};

/// Spectral initialization: leading eigenvector of Y scaled by
/// sqrt(lambda_0) with lambda_0 = ||y|| / sqrt(2M).
InitResult spectral_initialize(const SamplingEnsemble& ensemble, const RVector& y,
                               const SolveOptions& opts);

/// Wirtinger Flow: z_{k+1} = z_k - (mu_k / ||z0||^2) grad f(z_k) from the
/// spectral initialization, recording a per-iteration trace. When `truth` is
/// given, distances are recorded and convergence is declared on relative
/// distance; otherwise on relative objective.
SolveTrace solve(const SamplingEnsemble& ensemble, const RVector& y, const SolveOptions& opts,
                 const std::optional<CVector>& truth = std::nullopt);

/// Least-squares slope of log dist^2 over the last `window` iterations,
/// returned as exp(slope): the per-iteration contraction factor of dist^2.
/// Returns 0 if a recorded distance is exactly zero.
double fit_rate(const SolveTrace& trace, int window);

inline constexpr const char* kTraceCsvHeader = "k,objective,dist,step";

}  // namespace wf
