#pragma once

#include "wf/ensemble.hpp"
#include "wf/types.hpp"

namespace wf {

/// Exact Hermitian symmetrization (H + H^H)/2, applied after every adjoint
/// accumulation to suppress floating-point drift.
CMatrix symmetrize(const CMatrix& h);

/// Relative deviation from Hermitian symmetry, ||H - H^H||_F / max(||H||_F, tiny).
double hermitian_defect(const CMatrix& h);

/// Spectral norm of a Hermitian matrix. Dense eigendecomposition for N <= 64,
/// otherwise shifted power iteration on +H and -H (largest |eigenvalue|),
/// with a Rayleigh-quotient tolerance and an iteration cap.
double hermitian_spectral_norm(const CMatrix& h, double tol = 1e-10, int cap = 5000);

/// Power-iteration path of hermitian_spectral_norm, exposed so it can be
/// audited against the dense route. Throws NumericalError on non-convergence.
double hermitian_spectral_norm_power(const CMatrix& h, double tol = 1e-10, int cap = 5000);

double hermitian_spectral_norm_dense(const CMatrix& h);

struct LeadingEig {
  double value = 0.0;  // algebraically largest eigenvalue
  CVector vector;      // unit norm, deterministic phase
  int iterations = 0;
  double residual = 0.0;  // ||H v - value v||
};

/// Leading eigenpair of a Hermitian matrix via shifted power iteration with a
/// deterministic all-ones start (fixed pseudo-random fallback on stagnation).
LeadingEig leading_hermitian_eig(const CMatrix& h, double tol = 1e-10, int cap = 5000);

/// y_m = |<a_m, z>|^2.
RVector forward_intensity(const SamplingEnsemble& ensemble, const CVector& z);

/// The lifted forward model applied to a Hermitian matrix: out_m = a_m^H h a_m.
/// Rejects inputs with Hermitian defect beyond 1e-10 relative.
RVector lifted_apply_hermitian(const SamplingEnsemble& ensemble, const CMatrix& h);

/// Unnormalized adjoint sum_m v_m a_m a_m^H, Hermitian by construction.
CMatrix lifted_adjoint(const SamplingEnsemble& ensemble, const RVector& v);

struct SpectralEstimate {
  CMatrix matrix;          // Y = (1/M) sum_m y_m a_m a_m^H, exactly symmetrized
  double leading_value = 0.0;
  CVector leading_vector;  // unit norm when filled
  double energy_estimate = 0.0;  // lambda_0 = ||y|| / sqrt(2M)
};

/// Backprojection estimate Y = (1/M) A^H(y); leading pair left unfilled.
SpectralEstimate spectral_matrix(const SamplingEnsemble& ensemble, const RVector& y);

struct DeltaResidual {
  CMatrix residual;  // (1/M) A^H A(xx^H) - xx^H - ||x||^2 I
  double norm = 0.0; // spectral norm of the residual (caller divides by ||x||^2)
};

DeltaResidual delta_residual(const SamplingEnsemble& ensemble, const CVector& x,
                             double tol = 1e-10, int cap = 5000);

/// (1/M) ||A(xx^H)||^2 / ||xx^H||_F^2 = (1/M) sum_m |a_m^H x|^4 / ||x||^4;
/// concentrates around 2 for the Gaussian model.
double tight_frame_ratio(const SamplingEnsemble& ensemble, const CVector& x);

}  // namespace wf
