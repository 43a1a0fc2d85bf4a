#include "wf/ensemble.hpp"

#include "wf/rng.hpp"

namespace wf {

SamplingEnsemble ensemble_from_vectors(const CMatrix& vectors, EnsembleModel model,
                                       std::uint64_t seed) {
  require(vectors.rows() >= 1 && vectors.cols() >= 1, "ensemble: need M >= 1 and N >= 1");
  require(vectors.allFinite(), "ensemble: non-finite entry");
  SamplingEnsemble e;
  e.rows_h = vectors.conjugate();  // row m becomes a_m^H
  e.model = model;
  e.seed = seed;
  return e;
}

SamplingEnsemble generate_gaussian_ensemble(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  require(n >= 1, "gaussian ensemble: n must be positive");
  require(m >= 1, "gaussian ensemble: m must be positive");
  RngStream rng(seed, 0);
  CMatrix vectors(m, n);
  for (Eigen::Index row = 0; row < m; ++row)
    for (Eigen::Index col = 0; col < n; ++col) vectors(row, col) = rng.cnormal();
  return ensemble_from_vectors(vectors, EnsembleModel::gaussian, seed);
}

}  // namespace wf
