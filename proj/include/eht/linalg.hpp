#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace eht {

using cxd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Hilbert-space dimension of n qubits; n must stay small enough for dense
// storage, callers enforce their own caps.
inline std::size_t dim_of(int n_sites) { return std::size_t{1} << n_sites; }

inline double hermiticity_defect(const MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const MatrixXcd& m, double tol = 1e-10) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

inline double unitarity_defect(const MatrixXcd& u) {
  return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

inline bool is_unitary(const MatrixXcd& u, double tol = 1e-8) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

// Averages away anti-Hermitian round-off; keeps eigenvalues real.
inline MatrixXcd symmetrized(const MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace eht
