// Command-line front end: certificate curves, ensemble certification, solve
// runs, phase-transition sweeps, noise experiments, and inequality audits.
// Every command is deterministic given its full configuration including the
// seed; all CSV floats carry 12 significant digits.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wf/certificates.hpp"
#include "wf/checks.hpp"
#include "wf/ensemble.hpp"
#include "wf/io.hpp"
#include "wf/lifted.hpp"
#include "wf/noise.hpp"
#include "wf/rng.hpp"
#include "wf/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct EnsembleConfig {
  std::string model = "gaussian";
  std::int64_t n = 16;
  std::int64_t m = 64;
  std::uint64_t seed = 1;
};

void add_ensemble_flags(CLI::App* cmd, EnsembleConfig& cfg) {
  cmd->add_option("--model", cfg.model, "gaussian or file:<path>");
  cmd->add_option("--n", cfg.n, "signal length (gaussian model)");
  cmd->add_option("--m", cfg.m, "number of sampling vectors (gaussian model)");
  cmd->add_option("--seed", cfg.seed, "master seed");
}

wf::SamplingEnsemble build_ensemble(const EnsembleConfig& cfg) {
  if (cfg.model == "gaussian") {
    if (cfg.n < 1 || cfg.m < 1)
      throw std::invalid_argument("gaussian model needs positive --n and --m");
    return wf::generate_gaussian_ensemble(cfg.n, cfg.m, cfg.seed);
  }
  if (cfg.model.rfind("file:", 0) == 0) return wf::parse_ensemble(cfg.model.substr(5));
  throw std::invalid_argument("unknown model '" + cfg.model + "' (use gaussian or file:<path>)");
}

struct StepConfig {
  std::string mode = "heuristic_ramp";
  double delta = 0.0;
  double mu = 0.1;
  double mu_max = 0.2;
  double tau = 330.0;
  int max_iterations = 5000;
  double stop_tolerance = 1e-10;
  double power_iter_tolerance = 1e-10;
  int power_iter_cap = 5000;
};

void add_step_flags(CLI::App* cmd, StepConfig& cfg) {
  cmd->add_option("--step-mode", cfg.mode, "certified, fixed, or heuristic_ramp");
  cmd->add_option("--delta", cfg.delta, "concentration constant for certified mode");
  cmd->add_option("--mu", cfg.mu, "step size for fixed mode");
  cmd->add_option("--mu-max", cfg.mu_max, "ramp ceiling");
  cmd->add_option("--tau", cfg.tau, "ramp time constant");
  cmd->add_option("--max-iterations", cfg.max_iterations);
  cmd->add_option("--stop-tolerance", cfg.stop_tolerance);
  cmd->add_option("--power-iter-tolerance", cfg.power_iter_tolerance);
  cmd->add_option("--power-iter-cap", cfg.power_iter_cap);
}

wf::SolveOptions to_solve_options(const StepConfig& cfg) {
  wf::SolveOptions opts;
  if (cfg.mode == "certified")
    opts.step_mode = wf::StepMode::certified;
  else if (cfg.mode == "fixed")
    opts.step_mode = wf::StepMode::fixed;
  else if (cfg.mode == "heuristic_ramp")
    opts.step_mode = wf::StepMode::heuristic_ramp;
  else
    throw std::invalid_argument("unknown step mode '" + cfg.mode + "'");
  opts.delta = cfg.delta;
  opts.mu = cfg.mu;
  opts.mu_max = cfg.mu_max;
  opts.tau = cfg.tau;
  opts.max_iterations = cfg.max_iterations;
  opts.stop_tolerance = cfg.stop_tolerance;
  opts.power_iter_tolerance = cfg.power_iter_tolerance;
  opts.power_iter_cap = cfg.power_iter_cap;
  return opts;
}

int run_curves(const std::vector<double>& grid, const std::string& out) {
  if (grid.size() != 3) throw std::invalid_argument("--delta-grid needs start,stop,points");
  const int points = static_cast<int>(grid[2]);
  if (grid[0] < 0.0 || grid[1] > 0.49)
    throw std::invalid_argument("--delta-grid must stay within [0, 0.49]");
  std::vector<std::string> rows;
  for (const wf::CertificateReport& rep : wf::certificate_grid(grid[0], grid[1], points))
    rows.push_back(wf::certificate_csv_row(rep));
  wf::write_csv(out, wf::kCurveCsvHeader, rows);
  return kExitOk;
}

int run_certify(const EnsembleConfig& cfg, int restarts, int iterations, const std::string& out) {
  const wf::SamplingEnsemble ensemble = build_ensemble(cfg);
  const wf::DeltaEstimate est = wf::estimate_delta(ensemble, restarts, iterations, cfg.seed);
  const double star = wf::delta_star();

  std::ostringstream report;
  using wf::format_sig12;
  report << "model: " << cfg.model << "\n";
  report << "n: " << ensemble.n() << "\n";
  report << "m: " << ensemble.m() << "\n";
  report << "seed: " << cfg.seed << "\n";
  report << "restarts: " << restarts << "\n";
  report << "iterations: " << iterations << "\n";
  report << "delta_estimate: " << format_sig12(est.value) << "\n";
  report << "witness_norm: " << format_sig12(est.witness.norm()) << "\n";
  report << "witness_gap: " << format_sig12(wf::concentration_gap(ensemble, est.witness)) << "\n";
  report << "delta_star: " << format_sig12(star) << "\n";
  const bool certified = est.value <= star;
  report << "verdict: " << (certified ? "certified" : "out-of-regime") << "\n";
  if (est.value < 0.5) {
    const wf::CertificateReport rep = wf::certificate_chain(est.value);
    report << "epsilon: " << format_sig12(rep.epsilon) << "\n";
    report << "delta_hat: " << format_sig12(rep.delta_hat) << "\n";
    report << "h: " << format_sig12(rep.h) << "\n";
    report << "c: " << format_sig12(rep.c) << "\n";
    report << "r: " << format_sig12(rep.r) << "\n";
    report << "mu: " << format_sig12(rep.mu) << "\n";
    report << "alpha_prime: " << format_sig12(rep.alpha_prime) << "\n";
    report << "beta_prime: " << format_sig12(rep.beta_prime) << "\n";
    report << "snr_min_db: " << format_sig12(rep.snr_min_db) << "\n";
  } else {
    report << "note: delta estimate outside the certificate domain [0, 0.5)\n";
  }
  std::ofstream file(out);
  if (!file) throw wf::IoError(out + ": cannot open for writing");
  file << report.str();
  if (!file) throw wf::IoError(out + ": write failed");
  return kExitOk;
}

int run_solve(const EnsembleConfig& cfg, const StepConfig& step, const std::string& truth_path,
              double snr_db, const std::string& out, const std::string& solution_out) {
  const wf::SamplingEnsemble ensemble = build_ensemble(cfg);
  wf::CVector truth;
  if (!truth_path.empty()) {
    truth = wf::parse_signal(truth_path);
    if (truth.size() != ensemble.n())
      throw std::invalid_argument("--truth length does not match the ensemble");
  } else {
    wf::RngStream rng(cfg.seed, 1);
    truth = rng.unit_vector(ensemble.n());
  }
  wf::RVector y = wf::forward_intensity(ensemble, truth);
  if (std::isfinite(snr_db))
    y = wf::add_noise(y, snr_db, wf::NoiseDistribution::gaussian_real, wf::derive_seed(cfg.seed, 2))
            .y;

  const wf::SolveTrace trace = wf::solve(ensemble, y, to_solve_options(step), truth);

  std::vector<std::string> rows;
  rows.reserve(trace.iterates.size());
  for (const wf::TracePoint& p : trace.iterates) {
    std::ostringstream os;
    os << p.k << "," << wf::format_sig12(p.objective) << ","
       << (p.dist_to_truth ? wf::format_sig12(*p.dist_to_truth) : "nan") << ","
       << wf::format_sig12(p.step);
    rows.push_back(os.str());
  }
  wf::write_csv(out, wf::kTraceCsvHeader, rows);
  if (!solution_out.empty()) wf::write_signal(trace.final_estimate, solution_out);
  return kExitOk;
}

int run_sweep(std::int64_t n, const std::vector<double>& ratios, int trials,
              const StepConfig& step, std::uint64_t seed, const std::string& out) {
  if (n < 1) throw std::invalid_argument("--n must be positive");
  if (trials < 1) throw std::invalid_argument("--trials must be positive");
  const wf::SolveOptions opts = to_solve_options(step);
  std::vector<std::string> rows;
  for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
    const auto m = static_cast<std::int64_t>(ratios[ri] * static_cast<double>(n));
    if (m < 1) throw std::invalid_argument("ratio ladder produced an empty ensemble");
    int successes = 0;
    std::vector<double> iters;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t instance = ri * static_cast<std::uint64_t>(trials) + t;
      const wf::SamplingEnsemble ensemble =
          wf::generate_gaussian_ensemble(n, m, wf::derive_seed(seed, instance));
      wf::RngStream rng(seed ^ 0x5EEDULL, instance);
      const wf::CVector x = rng.unit_vector(n);
      const wf::SolveTrace trace = wf::solve(ensemble, wf::forward_intensity(ensemble, x), opts, x);
      const double rel = wf::distance(trace.final_estimate, x) / x.norm();
      if (rel <= 1e-5) ++successes;
      iters.push_back(static_cast<double>(trace.iterates.back().k));
    }
    std::sort(iters.begin(), iters.end());
    const double median_iters =
        trials % 2 == 1 ? iters[trials / 2] : 0.5 * (iters[trials / 2 - 1] + iters[trials / 2]);
    std::ostringstream os;
    os << wf::format_sig12(ratios[ri]) << "," << trials << ","
       << wf::format_sig12(static_cast<double>(successes) / trials) << ","
       << wf::format_sig12(median_iters);
    rows.push_back(os.str());
  }
  wf::write_csv(out, "ratio,trials,success_rate,median_iters", rows);
  return kExitOk;
}

int run_noisy(const EnsembleConfig& cfg, const StepConfig& step, std::vector<double> ladder,
              int trials, bool estimate_missing_delta, const std::string& out) {
  const wf::SamplingEnsemble ensemble = build_ensemble(cfg);
  StepConfig effective = step;
  if (estimate_missing_delta)
    effective.delta = effective.mode == "certified"
                          ? wf::estimate_delta(ensemble, 64, 200, cfg.seed).value
                          : 0.0;  // envelope reference only
  if (effective.mode == "certified" && effective.delta > wf::delta_star())
    throw wf::NumericalError("noisy: delta " + wf::format_sig12(effective.delta) +
                             " is outside the exact-recovery regime; certify the ensemble or "
                             "pass a valid --delta");
  if (ladder.empty()) ladder = {30.0, 42.0, 54.0};
  const wf::NoisySummary summary =
      wf::noisy_experiment(ensemble, ladder, trials, to_solve_options(effective), cfg.seed);
  std::vector<std::string> rows;
  for (const wf::NoisySummaryRow& r : summary.rows) {
    std::ostringstream os;
    os << wf::format_sig12(r.snr_db) << "," << r.trials << ","
       << wf::format_sig12(r.mean_rel_dist) << "," << wf::format_sig12(r.median_rel_dist) << ","
       << wf::format_sig12(r.envelope_asymptote) << "," << wf::format_sig12(summary.slope_fit);
    rows.push_back(os.str());
  }
  wf::write_csv(out, wf::kNoisyCsvHeader, rows);
  return kExitOk;
}

std::string check_row(const wf::CheckResult& c) {
  std::ostringstream os;
  os << c.name << "," << (c.holds ? 1 : 0) << "," << wf::format_sig12(c.lhs) << ","
     << wf::format_sig12(c.rhs) << "," << wf::format_sig12(c.margin) << "," << c.witness;
  return os.str();
}

int run_audit(const EnsembleConfig& cfg, int instances, double epsilon, double delta_flag,
              const std::string& mode, const std::string& out) {
  if (instances < 1) throw std::invalid_argument("--instances must be positive");
  if (mode != "honest" && mode != "inflated")
    throw std::invalid_argument("--mode must be honest or inflated");
  const wf::SamplingEnsemble ensemble = build_ensemble(cfg);
  double delta = delta_flag;
  if (delta < 0.0) delta = wf::estimate_delta(ensemble, 64, 200, cfg.seed).value;
  if (mode == "inflated") delta *= 1.5;

  // Certificate-level regularity is only checkable inside the valid regime.
  std::optional<wf::CertificateReport> report;
  if (delta <= wf::delta_star()) report = wf::certificate_chain(delta);

  std::vector<std::string> rows;
  std::vector<wf::CheckResult> violations;
  std::vector<std::pair<wf::CVector, wf::CVector>> violation_pairs;
  for (int i = 0; i < instances; ++i) {
    wf::RngStream rng(cfg.seed ^ 0xA0D17ULL, i);
    const wf::CVector x = rng.cnormal_vector(ensemble.n());
    const wf::CVector z = wf::sample_in_neighborhood(x, epsilon, rng, i % 4 == 0);
    std::vector<wf::CheckResult> checks;
    const auto [l3lo, l3hi] = wf::check_lifted_distance(z, x, epsilon);
    checks.push_back(l3lo);
    checks.push_back(l3hi);
    const auto [riplo, riphi] = wf::check_rip(ensemble, z, x, delta, epsilon);
    checks.push_back(riplo);
    checks.push_back(riphi);
    checks.push_back(wf::check_lipschitz(ensemble, z, x, delta, epsilon));
    checks.push_back(wf::check_strong_convexity(ensemble, z, x, delta, epsilon));
    if (report && wf::distance(z, x) <= report->epsilon * x.norm()) {
      const wf::RVector y = wf::forward_intensity(ensemble, x);
      checks.push_back(wf::check_regularity(ensemble, y, z, x, *report));
    }
    for (const wf::CheckResult& c : checks) {
      rows.push_back(check_row(c));
      if (!c.holds) {
        violations.push_back(c);
        violation_pairs.emplace_back(x, z);
      }
    }
  }
  wf::write_csv(out, wf::kCheckCsvHeader, rows);
  if (!violations.empty()) wf::write_ensemble(ensemble, out + ".violation.ens");
  for (std::size_t v = 0; v < violations.size(); ++v) {
    const std::string prefix = out + ".violation" + std::to_string(v);
    wf::write_signal(violation_pairs[v].first, prefix + ".x.sig");
    wf::write_signal(violation_pairs[v].second, prefix + ".z.sig");
    wf::write_csv(prefix + ".csv", wf::kCheckCsvHeader, {check_row(violations[v])});
  }
  std::cout << "audit: " << rows.size() << " checks, " << violations.size() << " violations\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wirtinger Flow phase retrieval solver and recovery-certificate toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file with a [command] section; flags override it");

  auto* curves = app.add_subcommand("curves", "certificate chain on a delta grid");
  curves->fallthrough(true);
  std::vector<double> grid{0.0, 0.184, 185};
  std::string curves_out = "curves.csv";
  curves->add_option("--delta-grid", grid, "start,stop,points")->expected(3)->delimiter(',');
  curves->add_option("--out", curves_out);

  auto* certify = app.add_subcommand("certify", "estimate delta and print the certificate");
  certify->fallthrough(true);
  EnsembleConfig certify_cfg;
  int restarts = 64, cert_iterations = 200;
  std::string certify_out = "certify.txt";
  add_ensemble_flags(certify, certify_cfg);
  certify->add_option("--restarts", restarts);
  certify->add_option("--iterations", cert_iterations);
  certify->add_option("--out", certify_out);

  auto* solve_cmd = app.add_subcommand("solve", "run Wirtinger Flow and export the trace");
  solve_cmd->fallthrough(true);
  EnsembleConfig solve_cfg;
  StepConfig solve_step;
  std::string truth_path, solution_out;
  std::string solve_out = "trace.csv";
  double solve_snr = std::numeric_limits<double>::infinity();
  add_ensemble_flags(solve_cmd, solve_cfg);
  add_step_flags(solve_cmd, solve_step);
  solve_cmd->add_option("--truth", truth_path, "signal file with the ground truth");
  solve_cmd->add_option("--snr-db", solve_snr, "additive intensity noise level");
  solve_cmd->add_option("--out", solve_out);
  solve_cmd->add_option("--solution-out", solution_out, "write the final estimate here");

  auto* sweep = app.add_subcommand("sweep", "success rate against the oversampling ratio");
  sweep->fallthrough(true);
  std::int64_t sweep_n = 32;
  std::vector<double> ratios{2, 4, 6, 8, 10};
  int sweep_trials = 50;
  std::uint64_t sweep_seed = 1;
  StepConfig sweep_step;
  sweep_step.max_iterations = 2500;
  sweep_step.stop_tolerance = 1e-6;
  std::string sweep_out = "sweep.csv";
  sweep->add_option("--n", sweep_n);
  sweep->add_option("--ratios", ratios)->delimiter(',');
  sweep->add_option("--trials", sweep_trials);
  sweep->add_option("--seed", sweep_seed);
  add_step_flags(sweep, sweep_step);
  sweep->add_option("--out", sweep_out);

  auto* noisy = app.add_subcommand("noisy", "noise experiment over an SNR ladder");
  noisy->fallthrough(true);
  EnsembleConfig noisy_cfg;
  StepConfig noisy_step;
  noisy_step.mode = "certified";
  noisy_step.delta = -1.0;  // estimate from the ensemble when not given
  noisy_step.max_iterations = 400;
  noisy_step.stop_tolerance = 1e-9;
  std::vector<double> ladder;
  int noisy_trials = 50;
  std::string noisy_out = "noisy.csv";
  add_ensemble_flags(noisy, noisy_cfg);
  add_step_flags(noisy, noisy_step);
  noisy->add_option("--snr-db", ladder, "SNR ladder in dB")->delimiter(',');
  noisy->add_option("--trials", noisy_trials);
  noisy->add_option("--out", noisy_out);

  auto* audit = app.add_subcommand("audit", "inequality audits with counterexample export");
  audit->fallthrough(true);
  EnsembleConfig audit_cfg;
  int audit_instances = 200;
  double audit_epsilon = 0.4, audit_delta = -1.0;
  std::string audit_mode = "inflated", audit_out = "audit.csv";
  add_ensemble_flags(audit, audit_cfg);
  audit->add_option("--instances", audit_instances);
  audit->add_option("--epsilon", audit_epsilon);
  audit->add_option("--delta", audit_delta, "uniform delta (estimated when omitted)");
  audit->add_option("--mode", audit_mode, "honest or inflated (x1.5)");
  audit->add_option("--out", audit_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (curves->parsed()) return run_curves(grid, curves_out);
    if (certify->parsed()) return run_certify(certify_cfg, restarts, cert_iterations, certify_out);
    if (solve_cmd->parsed())
      return run_solve(solve_cfg, solve_step, truth_path, solve_snr, solve_out, solution_out);
    if (sweep->parsed())
      return run_sweep(sweep_n, ratios, sweep_trials, sweep_step, sweep_seed, sweep_out);
    if (noisy->parsed())
      return run_noisy(noisy_cfg, noisy_step, ladder, noisy_trials, noisy_step.delta < 0.0,
                       noisy_out);
    if (audit->parsed())
      return run_audit(audit_cfg, audit_instances, audit_epsilon, audit_delta, audit_mode,
                       audit_out);
  } catch (const wf::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const wf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
