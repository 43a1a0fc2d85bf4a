#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "wf/certificates.hpp"
#include "wf/ensemble.hpp"
#include "wf/rng.hpp"
#include "wf/types.hpp"

namespace wf {

/// One evaluated inequality. margin is the signed gap (>= 0 when the claim
/// holds); a -1e-9 absolute floor absorbs floating-point noise in the
/// legitimately tight cases.
struct CheckResult {
  std::string name;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string witness;
};

inline constexpr double kCheckMarginFloor = -1e-9;
inline constexpr const char* kCheckCsvHeader = "name,holds,lhs,rhs,margin,witness";

CheckResult make_check(const std::string& name, double lhs, double rhs,
                       const std::string& witness);

/// Samples z with dist(z, x) <= eps ||x|| exactly by construction:
/// z = e^{j phi} x + t u with unit u and t <= eps ||x||, then phase-randomized.
/// on_boundary pins t = eps ||x||.
CVector sample_in_neighborhood(const CVector& x, double epsilon, RngStream& rng,
                               bool on_boundary = false);

/// Lifted-distance sandwich: h1 dist ||x|| <= ||zz^H - xx^H||_F <= h2 dist ||x||,
/// pure geometry, dense Frobenius norms. Requires dist(z,x) <= eps ||x||, eps < 1.
std::pair<CheckResult, CheckResult> check_lifted_distance(const CVector& z, const CVector& x,
                                                 double epsilon);

/// Local restricted isometry of the lifted model over differences of lifted
/// points: (1-dh) ||D||_F^2 <= (1/M)||A(D)||^2 <= (2+dh) ||D||_F^2.
std::pair<CheckResult, CheckResult> check_rip(const SamplingEnsemble& ensemble, const CVector& z,
                                              const CVector& x, double delta, double epsilon);

/// Gradient bound ||grad f(z)|| <= c(delta) dist(z,x) ||x||^2.
CheckResult check_lipschitz(const SamplingEnsemble& ensemble, const CVector& z, const CVector& x,
                            double delta, double epsilon);

/// Curvature floor f(z) >= (h/2) dist^2(z,x) ||x||^2.
CheckResult check_strong_convexity(const SamplingEnsemble& ensemble, const CVector& z,
                                   const CVector& x, double delta, double epsilon);

/// The regularity condition with alpha = alpha'/||x||^2, beta = beta' ||x||^2
/// taken from the report:
/// Re<grad f(z), z - x e^{j Phi(z)}> >= (1/alpha) dist^2 + (1/beta) ||grad f||^2.
CheckResult check_regularity(const SamplingEnsemble& ensemble, const RVector& y, const CVector& z,
                             const CVector& x, const CertificateReport& report);

struct UniformityHistogram {
  double max = 0.0;
  double mean = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  int samples = 0;
};

/// Empirical stand-in for the uniformity of the concentration bound: the
/// distribution of g(x) over random unit x. Deterministic in seed.
UniformityHistogram uniformity_probe(const SamplingEnsemble& ensemble, int samples,
                                     std::uint64_t seed);

}  // namespace wf
