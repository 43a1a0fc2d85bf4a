#include "wf/lifted.hpp"

#include <algorithm>
#include <cmath>

#include "wf/rng.hpp"

namespace wf {

namespace {

constexpr Eigen::Index kDenseEigCutoff = 64;

void require_square(const CMatrix& h) {
  require(h.rows() == h.cols(), "hermitian matrix must be square");
}

/// Largest eigenvalue of a Hermitian matrix by power iteration on h + shift I,
/// where shift is a Gershgorin bound making the target eigenvalue dominant.
/// Returns the Rayleigh quotient with respect to h.
struct PowerResult {
  double value = 0.0;
  CVector vector;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

PowerResult shifted_power_top_eig(const CMatrix& h, const CVector& start, double tol, int cap) {
  const Eigen::Index n = h.rows();
  const double shift = h.cwiseAbs().rowwise().sum().maxCoeff();
  PowerResult out;
  if (shift == 0.0) {  // zero matrix
    out.value = 0.0;
    out.vector = CVector::Unit(n, 0);
    out.converged = true;
    return out;
  }
  CVector u = start.normalized();
  double rayleigh = u.dot(h * u).real();
  for (int it = 1; it <= cap; ++it) {
    CVector w = h * u + shift * u;
    const double wn = w.norm();
    if (wn == 0.0) {  // u is an exact eigenvector of eigenvalue -shift
      out.value = -shift;
      out.vector = u;
      out.converged = true;
      out.iterations = it;
      return out;
    }
    u = w / wn;
    const double next = u.dot(h * u).real();
    const bool done = std::abs(next - rayleigh) <= tol * std::max(1.0, std::abs(next));
    rayleigh = next;
    if (done) {
      out.value = rayleigh;
      out.vector = u;
      out.converged = true;
      out.iterations = it;
      out.residual = (h * u - rayleigh * u).norm();
      return out;
    }
  }
  out.value = rayleigh;
  out.vector = u;
  out.iterations = cap;
  out.residual = (h * u - rayleigh * u).norm();
  return out;
}

PowerResult top_eig_with_fallback_start(const CMatrix& h, double tol, int cap) {
  const Eigen::Index n = h.rows();
  CVector ones = CVector::Constant(n, Complex(1.0, 0.0));
  PowerResult res = shifted_power_top_eig(h, ones, tol, cap);
  if (res.converged) return res;
  // Orthogonal-start pathology: retry once from a fixed pseudo-random vector.
  RngStream rng(0x57A67ULL, 0);
  PowerResult retry = shifted_power_top_eig(h, rng.cnormal_vector(n), tol, cap);
  return retry.converged ? retry : (retry.residual < res.residual ? retry : res);
}

}  // namespace

CMatrix symmetrize(const CMatrix& h) {
  require_square(h);
  return 0.5 * (h + h.adjoint());
}

double hermitian_defect(const CMatrix& h) {
  require_square(h);
  const double scale = h.norm();
  if (scale == 0.0) return 0.0;
  return (h - CMatrix(h.adjoint())).norm() / scale;
}

double hermitian_spectral_norm_dense(const CMatrix& h) {
  require_square(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(symmetrize(h), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double hermitian_spectral_norm_power(const CMatrix& h, double tol, int cap) {
  require_square(h);
  const CMatrix hs = symmetrize(h);
  PowerResult plus = top_eig_with_fallback_start(hs, tol, cap);
  PowerResult minus = top_eig_with_fallback_start(-hs, tol, cap);
  if (!plus.converged || !minus.converged)
    throw NumericalError("spectral norm power iteration did not converge, residual " +
                         std::to_string(std::max(plus.residual, minus.residual)));
  return std::max(plus.value, minus.value);
}

double hermitian_spectral_norm(const CMatrix& h, double tol, int cap) {
  require_square(h);
  if (h.rows() <= kDenseEigCutoff) return hermitian_spectral_norm_dense(h);
  try {
    return hermitian_spectral_norm_power(h, tol, cap);
  } catch (const NumericalError&) {
    return hermitian_spectral_norm_dense(h);
  }
}

LeadingEig leading_hermitian_eig(const CMatrix& h, double tol, int cap) {
  require_square(h);
  const CMatrix hs = symmetrize(h);
  PowerResult res = top_eig_with_fallback_start(hs, tol, cap);
  if (!res.converged)
    throw NumericalError("leading eigenpair power iteration did not converge, residual " +
                         std::to_string(res.residual));
  // Deterministic phase: rotate the largest-modulus entry onto the positive real axis.
  Eigen::Index imax = 0;
  res.vector.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = res.vector[imax];
  if (std::abs(pivot) > 0.0) res.vector *= std::conj(pivot) / std::abs(pivot);
  LeadingEig out;
  out.value = res.value;
  out.vector = res.vector;
  out.iterations = res.iterations;
  out.residual = (hs * res.vector - res.value * res.vector).norm();
  return out;
}

RVector forward_intensity(const SamplingEnsemble& ensemble, const CVector& z) {
  require(z.size() == ensemble.n(), "forward_intensity: dimension mismatch");
  return (ensemble.rows_h * z).cwiseAbs2();
}

RVector lifted_apply_hermitian(const SamplingEnsemble& ensemble, const CMatrix& h) {
  require(h.rows() == ensemble.n() && h.cols() == ensemble.n(),
          "lifted_apply_hermitian: dimension mismatch");
  if (hermitian_defect(h) > 1e-10)
    throw std::invalid_argument("lifted_apply_hermitian: input is not Hermitian within tolerance");
  const CMatrix hs = symmetrize(h);
  // out_m = a_m^H hs a_m = sum_j (rows_h hs)(m,j) conj(rows_h(m,j))
  return ((ensemble.rows_h * hs).cwiseProduct(ensemble.rows_h.conjugate())).rowwise().sum().real();
}

CMatrix lifted_adjoint(const SamplingEnsemble& ensemble, const RVector& v) {
  require(v.size() == ensemble.m(), "lifted_adjoint: dimension mismatch");
  CMatrix acc = ensemble.rows_h.adjoint() * v.asDiagonal() * ensemble.rows_h;
  return symmetrize(acc);
}

SpectralEstimate spectral_matrix(const SamplingEnsemble& ensemble, const RVector& y) {
  SpectralEstimate est;
  est.matrix = lifted_adjoint(ensemble, y) / static_cast<double>(ensemble.m());
  return est;
}

DeltaResidual delta_residual(const SamplingEnsemble& ensemble, const CVector& x, double tol,
                             int cap) {
  require(x.size() == ensemble.n(), "delta_residual: dimension mismatch");
  const double xnorm2 = x.squaredNorm();
  require(xnorm2 > 0.0, "delta_residual: x must be nonzero");
  const RVector y = forward_intensity(ensemble, x);
  DeltaResidual out;
  out.residual = spectral_matrix(ensemble, y).matrix;
  out.residual.noalias() -= x * x.adjoint();
  out.residual.diagonal().array() -= xnorm2;
  out.residual = symmetrize(out.residual);
  out.norm = hermitian_spectral_norm(out.residual, tol, cap);
  return out;
}

double tight_frame_ratio(const SamplingEnsemble& ensemble, const CVector& x) {
  require(x.size() == ensemble.n(), "tight_frame_ratio: dimension mismatch");
  const double xnorm2 = x.squaredNorm();
  require(xnorm2 > 0.0, "tight_frame_ratio: x must be nonzero");
  const RVector y = forward_intensity(ensemble, x);
  return y.squaredNorm() / static_cast<double>(ensemble.m()) / (xnorm2 * xnorm2);
}

}  // namespace wf
