#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nqrent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Shared elementwise absolute tolerance for "is this operator Hermitian".
inline constexpr double kHermitianTol = 1e-10;

inline bool is_square(const ComplexMatrix& m) {
  return m.rows() == m.cols() && m.rows() >= 1;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  if (!is_square(m)) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const ComplexMatrix& m, double tol = 1e-11) {
  if (!is_square(m)) return false;
  ComplexMatrix r = m.adjoint() * m;
  r -= ComplexMatrix::Identity(m.rows(), m.cols());
  return r.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace nqrent
