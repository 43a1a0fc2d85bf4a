#pragma once

#include <cstdint>

#include "wf/types.hpp"

namespace wf {

enum class EnsembleModel { gaussian, file };

/// The M sampling vectors {a_m} of the measurement map y_m = |<a_m, x>|^2,
/// stored densely. rows_h.row(m) holds a_m^H, so rows_h * z evaluates all the
/// inner products a_m^H z in one product.
struct SamplingEnsemble {
  CMatrix rows_h;  // M x N
  EnsembleModel model = EnsembleModel::file;
  std::uint64_t seed = 0;  // meaningful only when model == gaussian

  Eigen::Index n() const { return rows_h.cols(); }
  Eigen::Index m() const { return rows_h.rows(); }

  CVector vector(Eigen::Index row) const { return rows_h.row(row).adjoint(); }
};

/// Builds an ensemble from the vectors a_m themselves (one per row of `vectors`).
SamplingEnsemble ensemble_from_vectors(const CMatrix& vectors, EnsembleModel model,
                                       std::uint64_t seed = 0);

/// M i.i.d. vectors with circularly symmetric complex normal entries of unit
/// per-entry variance (real/imaginary parts variance 1/2 each). Deterministic
/// in `seed`.
SamplingEnsemble generate_gaussian_ensemble(Eigen::Index n, Eigen::Index m, std::uint64_t seed);

}  // namespace wf
