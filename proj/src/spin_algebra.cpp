#include "nqrent/spin_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace nqrent {

SpinOperators spin_operators(const SpinSystem& spin) {
  const int d = spin.dim();
  const double I = spin.spin();

  SpinOperators ops;
  ops.iz = ComplexMatrix::Zero(d, d);
  ops.i_plus = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) ops.iz(k, k) = I - k;
  // <m+1| I+ |m> = sqrt(I(I+1) - m(m+1)); with descending-m ordering the
  // target row sits one above the source column.
  for (int k = 1; k < d; ++k) {
    const double m = I - k;
    ops.i_plus(k - 1, k) = std::sqrt(I * (I + 1) - m * (m + 1));
  }
  ops.i_minus = ops.i_plus.adjoint();
  ops.ix = 0.5 * (ops.i_plus + ops.i_minus);
  ops.iy = Complex(0, -0.5) * (ops.i_plus - ops.i_minus);
  ops.i_squared = I * (I + 1) * ComplexMatrix::Identity(d, d);
  return ops;
}

HermitianEig hermitian_eig(const ComplexMatrix& m) {
  if (!is_square(m)) throw BadDimension("hermitian_eig: matrix must be square");
  if (m.rows() > 16) throw BadDimension("hermitian_eig: dimension exceeds 16");
  if (!is_hermitian(m)) throw NotHermitian("hermitian_eig: input is not Hermitian");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_eig: eigensolver failed to converge");
  return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m, double scale) {
  const HermitianEig eig = hermitian_eig(m);
  const RealVector w = (scale * eig.eigenvalues.array()).exp();
  return eig.eigenvectors * w.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw BadDimension("partial_trace: expected a 4x4 matrix");
  if (std::abs(rho.trace() - Complex(1, 0)) > 1e-10)
    throw InvalidDensityMatrix("partial_trace: trace deviates from 1 beyond 1e-10");

  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  if (keep == Subsystem::A) {
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap)
        for (int b = 0; b < 2; ++b) out(a, ap) += rho(2 * a + b, 2 * ap + b);
  } else {
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp)
        for (int a = 0; a < 2; ++a) out(b, bp) += rho(2 * a + b, 2 * a + bp);
  }
  return out;
}

}  // namespace nqrent
