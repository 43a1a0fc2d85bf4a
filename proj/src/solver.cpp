#include "wf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wf {

namespace {

double step_for_iteration(const SolveOptions& opts, int k, double certified_mu) {
  switch (opts.step_mode) {
    case StepMode::certified:
      return certified_mu;
    case StepMode::fixed:
      return opts.mu;
    case StepMode::heuristic_ramp:
      return std::min(1.0 - std::exp(-static_cast<double>(k) / opts.tau), opts.mu_max);
  }
  return opts.mu;
}

}  // namespace

double distance(const CVector& z, const CVector& x) {
  require(z.size() == x.size(), "distance: dimension mismatch");
  const double scale = z.squaredNorm() + x.squaredNorm();
  const Complex corr = x.dot(z);
  const double d2 = scale - 2.0 * std::abs(corr);
  // The closed form cancels catastrophically once d^2 ~ eps * scale; below
  // that floor, evaluate the defining minimum ||z - x e^{j phi}|| directly.
  if (d2 <= 256.0 * std::numeric_limits<double>::epsilon() * scale) {
    if (std::abs(corr) == 0.0) return std::sqrt(std::max(0.0, d2));
    const Complex phase = corr / std::abs(corr);
    return (z - phase * x).norm();
  }
  return std::sqrt(std::max(0.0, d2));
}

PhaseAlignment phase_align(const CVector& z, const CVector& x) {
  require(z.size() == x.size(), "phase_align: dimension mismatch");
  PhaseAlignment out;
  const Complex corr = x.dot(z);  // x^H z
  if (std::abs(corr) == 0.0) {
    out.degenerate = true;
    out.phi = 0.0;
    out.aligned_truth = x;
    return out;
  }
  double phi = std::arg(corr);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  out.phi = phi;
  out.aligned_truth = x * std::polar(1.0, phi);
  return out;
}

double intensity_objective(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z) {
  require(y.size() == ensemble.m(), "intensity_objective: measurement dimension mismatch");
  require(z.size() == ensemble.n(), "intensity_objective: signal dimension mismatch");
  const RVector residual = (ensemble.rows_h * z).cwiseAbs2() - y;
  return residual.squaredNorm() / (2.0 * static_cast<double>(ensemble.m()));
}

CVector wirtinger_gradient(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z) {
  require(y.size() == ensemble.m(), "wirtinger_gradient: measurement dimension mismatch");
  require(z.size() == ensemble.n(), "wirtinger_gradient: signal dimension mismatch");
  const CVector w = ensemble.rows_h * z;
  const RVector residual = w.cwiseAbs2() - y;
  return (ensemble.rows_h.adjoint() * residual.cast<Complex>().cwiseProduct(w)) /
         static_cast<double>(ensemble.m());
}

InitResult spectral_initialize(const SamplingEnsemble& ensemble, const RVector& y,
                               const SolveOptions& opts) {
  require(y.size() == ensemble.m(), "spectral_initialize: dimension mismatch");
  require(y.cwiseAbs().maxCoeff() > 0.0, "spectral_initialize: all-zero measurements");
  InitResult out;
  out.estimate = spectral_matrix(ensemble, y);
  LeadingEig top =
      leading_hermitian_eig(out.estimate.matrix, opts.power_iter_tolerance, opts.power_iter_cap);
  out.estimate.leading_value = top.value;
  out.estimate.leading_vector = top.vector;
  out.estimate.energy_estimate = y.norm() / std::sqrt(2.0 * static_cast<double>(ensemble.m()));
  out.z0 = std::sqrt(out.estimate.energy_estimate) * top.vector;
  return out;
}

SolveTrace solve(const SamplingEnsemble& ensemble, const RVector& y, const SolveOptions& opts,
                 const std::optional<CVector>& truth) {
  require(y.size() == ensemble.m(), "solve: measurement dimension mismatch");
  if (truth) require(truth->size() == ensemble.n(), "solve: truth dimension mismatch");
  require(opts.max_iterations >= 1, "solve: max_iterations must be positive");
  require(opts.stop_tolerance > 0.0, "solve: stop_tolerance must be positive");
  require(opts.power_iter_tolerance > 0.0, "solve: power_iter_tolerance must be positive");
  require(opts.power_iter_cap >= 1, "solve: power_iter_cap must be positive");

  double certified_mu = 0.0;
  if (opts.step_mode == StepMode::certified) {
    const CertificateReport rep = certificate_chain(opts.delta);
    if (!rep.valid)
      throw NumericalError("solve: certificate invalid, delta above the exact-recovery regime");
    certified_mu = rep.mu;
  }
  if (opts.step_mode == StepMode::fixed) require(opts.mu > 0.0, "solve: mu must be positive");
  if (opts.step_mode == StepMode::heuristic_ramp) {
    require(opts.mu_max > 0.0, "solve: mu_max must be positive");
    require(opts.tau > 0.0, "solve: tau must be positive");
  }

  SolveTrace trace;
  const double m = static_cast<double>(ensemble.m());

  // x = 0 is the unique consistent truth of all-zero measurements.
  if (y.cwiseAbs().maxCoeff() == 0.0) {
    trace.final_estimate = CVector::Zero(ensemble.n());
    TracePoint p;
    p.k = 0;
    p.objective = 0.0;
    if (truth) p.dist_to_truth = distance(trace.final_estimate, *truth);
    trace.iterates.push_back(p);
    trace.converged = true;
    return trace;
  }

  InitResult init = spectral_initialize(ensemble, y, opts);
  CVector z = init.z0;
  double norm_scale = z.squaredNorm();
  if (opts.step_norm == StepNorm::truth_energy) {
    require(truth.has_value(), "solve: truth_energy normalization needs the truth");
    norm_scale = truth->squaredNorm();
  }
  if (norm_scale <= 0.0) throw NumericalError("solve: degenerate initialization energy");

  const double truth_norm = truth ? truth->norm() : 0.0;
  double objective0 = 0.0;
  trace.iterates.reserve(static_cast<std::size_t>(opts.max_iterations) + 1);

  for (int k = 0; k <= opts.max_iterations; ++k) {
    const CVector w = ensemble.rows_h * z;
    const RVector residual = w.cwiseAbs2() - y;
    const double objective = residual.squaredNorm() / (2.0 * m);
    if (!std::isfinite(objective) || !z.allFinite())
      throw NumericalError("solve: iterate diverged at iteration " + std::to_string(k));
    if (k == 0) objective0 = objective;

    TracePoint point;
    point.k = k;
    point.objective = objective;
    if (truth) point.dist_to_truth = distance(z, *truth);

    bool done = false;
    if (truth)
      done = *point.dist_to_truth <= opts.stop_tolerance * truth_norm;
    else
      done = objective <= opts.stop_tolerance * objective0;
    if (done || k == opts.max_iterations) {
      point.step = 0.0;
      trace.iterates.push_back(point);
      trace.converged = done;
      break;
    }

    const double mu_k = step_for_iteration(opts, k + 1, certified_mu);
    point.step = mu_k;
    trace.iterates.push_back(point);

    const CVector grad =
        (ensemble.rows_h.adjoint() * residual.cast<Complex>().cwiseProduct(w)) / m;
    z -= (mu_k / norm_scale) * grad;
  }

  trace.final_estimate = z;
  if (truth) {
    const int window = std::min<int>(50, static_cast<int>(trace.iterates.size()) - 1);
    if (window >= 2) {
      bool positive = true;
      const std::size_t first = trace.iterates.size() - static_cast<std::size_t>(window) - 1;
      for (std::size_t i = first; i < trace.iterates.size(); ++i)
        positive = positive && trace.iterates[i].dist_to_truth.value_or(0.0) > 0.0;
      if (positive) trace.empirical_rate = fit_rate(trace, window);
    }
  }
  return trace;
}

double fit_rate(const SolveTrace& trace, int window) {
  require(window >= 1, "fit_rate: window must be positive");
  std::vector<std::pair<double, double>> points;  // (k, dist)
  for (const TracePoint& p : trace.iterates)
    if (p.dist_to_truth) points.emplace_back(static_cast<double>(p.k), *p.dist_to_truth);
  require(static_cast<int>(points.size()) >= window + 1,
          "fit_rate: trace shorter than the fit window");
  points.erase(points.begin(), points.end() - (window + 1));
  for (const auto& [k, d] : points)
    if (d == 0.0) return 0.0;
  // Least-squares slope of log dist^2 against k.
  double mean_k = 0.0, mean_v = 0.0;
  for (const auto& [k, d] : points) {
    mean_k += k;
    mean_v += 2.0 * std::log(d);
  }
  mean_k /= points.size();
  mean_v /= points.size();
  double num = 0.0, den = 0.0;
  for (const auto& [k, d] : points) {
    num += (k - mean_k) * (2.0 * std::log(d) - mean_v);
    den += (k - mean_k) * (k - mean_k);
  }
  return std::exp(num / den);
}

}  // namespace wf
