#include "wf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "wf/io.hpp"
#include "wf/lifted.hpp"
#include "wf/solver.hpp"

namespace wf {

namespace {

std::string describe(const CVector& z, const CVector& x, double epsilon) {
  std::ostringstream os;
  os << "n=" << x.size() << ";eps=" << format_sig12(epsilon)
     << ";dist=" << format_sig12(distance(z, x)) << ";xnorm=" << format_sig12(x.norm());
  return os.str();
}

void require_membership(const CVector& z, const CVector& x, double epsilon) {
  require(epsilon >= 0.0, "neighborhood radius must be non-negative");
  const double d = distance(z, x);
  require(d <= epsilon * x.norm() * (1.0 + 1e-12) + 1e-15,
          "z lies outside the epsilon-neighborhood of the solution set");
}

}  // namespace

CheckResult make_check(const std::string& name, double lhs, double rhs,
                       const std::string& witness) {
  CheckResult out;
  out.name = name;
  out.lhs = lhs;
  out.rhs = rhs;
  out.margin = rhs - lhs;
  out.holds = out.margin >= kCheckMarginFloor;
  out.witness = witness;
  return out;
}

CVector sample_in_neighborhood(const CVector& x, double epsilon, RngStream& rng,
                               bool on_boundary) {
  require(x.norm() > 0.0, "sample_in_neighborhood: x must be nonzero");
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const CVector u = rng.unit_vector(x.size());
  const double radius = epsilon * x.norm();
  const double t = on_boundary ? radius : radius * rng.uniform();
  CVector z = std::polar(1.0, phi) * x + t * u;
  const double psi = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(1.0, psi) * z;
}

std::pair<CheckResult, CheckResult> check_lifted_distance(const CVector& z, const CVector& x,
                                                 double epsilon) {
  require(z.size() == x.size(), "check_lifted_distance: dimension mismatch");
  require(epsilon < 1.0, "check_lifted_distance: epsilon must be below 1");
  require_membership(z, x, epsilon);
  const double d = distance(z, x);
  const double xn = x.norm();
  const CMatrix lifted_diff = z * z.adjoint() - x * x.adjoint();
  const double frob = lifted_diff.norm();
  const double h1 = std::sqrt((1.0 - epsilon) * (2.0 - epsilon));
  const double h2 = 2.0 + epsilon;
  const std::string witness = describe(z, x, epsilon);
  return {make_check("lifted_distance_lower", h1 * d * xn, frob, witness),
          make_check("lifted_distance_upper", frob, h2 * d * xn, witness)};
}

std::pair<CheckResult, CheckResult> check_rip(const SamplingEnsemble& ensemble, const CVector& z,
                                              const CVector& x, double delta, double epsilon) {
  require(z.size() == ensemble.n() && x.size() == ensemble.n(), "check_rip: dimension mismatch");
  require_membership(z, x, epsilon);
  const CMatrix lifted_diff = z * z.adjoint() - x * x.adjoint();
  const double frob2 = lifted_diff.squaredNorm();
  const RVector mapped = lifted_apply_hermitian(ensemble, lifted_diff);
  const double energy = mapped.squaredNorm() / static_cast<double>(ensemble.m());
  const double dh = rip_constant(delta, epsilon);
  const std::string witness = describe(z, x, epsilon) + ";delta=" + format_sig12(delta);
  return {make_check("rip_lower", (1.0 - dh) * frob2, energy, witness),
          make_check("rip_upper", energy, (2.0 + dh) * frob2, witness)};
}

CheckResult check_lipschitz(const SamplingEnsemble& ensemble, const CVector& z, const CVector& x,
                            double delta, double epsilon) {
  require(z.size() == ensemble.n() && x.size() == ensemble.n(),
          "check_lipschitz: dimension mismatch");
  require_membership(z, x, epsilon);
  const RVector y = forward_intensity(ensemble, x);
  const double grad_norm = wirtinger_gradient(ensemble, y, z).norm();
  const double c = (1.0 + epsilon) * (2.0 + epsilon) * (2.0 + delta);
  const double rhs = c * distance(z, x) * x.squaredNorm();
  return make_check("lipschitz", grad_norm, rhs,
                    describe(z, x, epsilon) + ";delta=" + format_sig12(delta));
}

CheckResult check_strong_convexity(const SamplingEnsemble& ensemble, const CVector& z,
                                   const CVector& x, double delta, double epsilon) {
  require(z.size() == ensemble.n() && x.size() == ensemble.n(),
          "check_strong_convexity: dimension mismatch");
  require_membership(z, x, epsilon);
  const RVector y = forward_intensity(ensemble, x);
  const double f = intensity_objective(ensemble, y, z);
  const double dh = rip_constant(delta, epsilon);
  const double h = (1.0 - dh) * (1.0 - epsilon) * (2.0 - epsilon);
  const double d = distance(z, x);
  const double rhs = 0.5 * h * d * d * x.squaredNorm();
  // The claim is f >= rhs, so the signed gap is f - rhs.
  return make_check("strong_convexity", rhs, f,
                    describe(z, x, epsilon) + ";delta=" + format_sig12(delta));
}

CheckResult check_regularity(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z,
                             const CVector& x, const CertificateReport& report) {
  require(z.size() == ensemble.n() && x.size() == ensemble.n(),
          "check_regularity: dimension mismatch");
  require(report.valid, "check_regularity: certificate report is not valid");
  require_membership(z, x, report.epsilon);
  const double xnorm2 = x.squaredNorm();
  const CVector grad = wirtinger_gradient(ensemble, y, z);
  const PhaseAlignment align = phase_align(z, x);
  const CVector offset = z - align.aligned_truth;
  const double lhs_curvature = offset.dot(grad).real();  // Re<grad, z - x e^{j phi}>
  const double d = distance(z, x);
  const double rhs = d * d * xnorm2 / report.alpha_prime +
                     grad.squaredNorm() / (report.beta_prime * xnorm2);
  return make_check("regularity", rhs, lhs_curvature,
                    describe(z, x, report.epsilon) + ";delta=" + format_sig12(report.delta));
}

UniformityHistogram uniformity_probe(const SamplingEnsemble& ensemble, int samples,
                                     std::uint64_t seed) {
  require(samples >= 1, "uniformity_probe: samples must be positive");
  RngStream rng(seed, 0);
  std::vector<double> gaps(samples);
  const double m = static_cast<double>(ensemble.m());
  // Draws stay sequential; evaluation is batched into one product per block.
  constexpr int kBlock = 256;
  CMatrix block(ensemble.n(), kBlock);
  for (int base = 0; base < samples; base += kBlock) {
    const int count = std::min(kBlock, samples - base);
    for (int j = 0; j < count; ++j) block.col(j) = rng.unit_vector(ensemble.n());
    const CMatrix w = ensemble.rows_h * block.leftCols(count);
    for (int j = 0; j < count; ++j)
      gaps[base + j] = std::abs(w.col(j).cwiseAbs2().squaredNorm() / m - 2.0);
  }
  UniformityHistogram hist;
  hist.samples = samples;
  hist.mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / samples;
  std::sort(gaps.begin(), gaps.end());
  hist.max = gaps.back();
  auto quantile = [&](double q) {
    const double pos = q * (samples - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min<std::size_t>(lo + 1, samples - 1);
    return gaps[lo] + (pos - lo) * (gaps[hi] - gaps[lo]);
  };
  hist.q50 = quantile(0.5);
  hist.q90 = quantile(0.9);
  hist.q99 = quantile(0.99);
  return hist;
}

}  // namespace wf
