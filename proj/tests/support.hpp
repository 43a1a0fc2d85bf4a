#pragma once

// Shared fixtures for the test suites: exact tight-frame designs with
// (1/M) A^H A(xx^H) = xx^H + ||x||^2 I, their perturbed near-certified
// variants, and small helpers.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>

#include "wf/ensemble.hpp"
#include "wf/rng.hpp"
#include "wf/types.hpp"

namespace wf::testing {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Complete set of mutually unbiased bases in C^n (prime n): the standard
/// basis plus n Fourier-type bases, n(n+1) unit vectors in total. Scaled by
/// (n(n+1))^{1/4} they satisfy the exact decomposition
/// (1/M) sum_m (a_m^H H a_m) a_m a_m^H = H + tr(H) I on Hermitian H.
inline SamplingEnsemble make_design_ensemble(int n) {
  if (!is_prime(n)) throw std::invalid_argument("design ensemble needs prime n");
  const int m = n * (n + 1);
  CMatrix vectors(m, n);
  int row = 0;
  for (int k = 0; k < n; ++k, ++row) {
    vectors.row(row).setZero();
    vectors(row, k) = Complex(1.0, 0.0);
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  if (n == 2) {
    const Complex i(0.0, 1.0);
    const CVector cols[4] = {(CVector(2) << 1, 1).finished(), (CVector(2) << 1, -1).finished(),
                             (CVector(2) << 1, i).finished(), (CVector(2) << 1, -i).finished()};
    for (const CVector& v : cols) vectors.row(row++) = inv_sqrt_n * v.transpose();
  } else {
    for (int basis = 0; basis < n; ++basis)
      for (int k = 0; k < n; ++k, ++row)
        for (int j = 0; j < n; ++j) {
          const double phase =
              2.0 * std::numbers::pi * ((basis * j * j + k * j) % n) / static_cast<double>(n);
          vectors(row, j) = inv_sqrt_n * std::polar(1.0, phase);
        }
  }
  const double scale = std::pow(static_cast<double>(n) * (n + 1), 0.25);
  return ensemble_from_vectors(scale * vectors, EnsembleModel::file);
}

/// Design ensemble with a small seeded complex-Gaussian perturbation; rho
/// controls the resulting concentration constant (estimated delta roughly
/// a few times rho at these sizes).
inline SamplingEnsemble make_perturbed_design(int n, double rho, std::uint64_t seed) {
  SamplingEnsemble base = make_design_ensemble(n);
  RngStream rng(seed, 0);
  CMatrix vectors(base.m(), base.n());
  for (Eigen::Index row = 0; row < base.m(); ++row)
    vectors.row(row) =
        (base.vector(row) + rho * rng.cnormal_vector(base.n())).transpose();
  return ensemble_from_vectors(vectors, EnsembleModel::file);
}

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace wf::testing
