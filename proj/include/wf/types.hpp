#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace wf {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;  // complex signal (x, z, a_m, ...)
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;   // intensity vector y

/// Numerical failure: divergence, eigen-solver non-convergence, invalid regime.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// File / parse failure, carries a line diagnostic where applicable.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const CVector& v) { return v.allFinite(); }
inline bool all_finite(const RVector& v) { return v.allFinite(); }

inline void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace wf
