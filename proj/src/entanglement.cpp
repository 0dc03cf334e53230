#include "nqrent/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nqrent {

namespace {

constexpr double kValidityTol = 1e-10;    // Hermitian / trace / PSD input gate
constexpr double kSpectrumReject = 1e-8;  // beyond this the input was bad

ComplexMatrix permute_to_qubit_basis(const ComplexMatrix& rho,
                                     const QubitMapping& mapping) {
  if (mapping.is_identity()) return rho;
  ComplexMatrix out(4, 4);
  const auto& p = mapping.permutation;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(p[i], p[j]) = rho(i, j);
  return out;
}

// Hermitian/trace/PSD gate; returns the eigendecomposition for reuse.
HermitianEig validate_density_matrix(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw InvalidDensityMatrix("density matrix must be 4x4");
  if (!is_hermitian(rho, kValidityTol))
    throw InvalidDensityMatrix("density matrix is not Hermitian within 1e-10");
  if (std::abs(rho.trace() - Complex(1, 0)) > kValidityTol)
    throw InvalidDensityMatrix("density matrix trace deviates from 1 beyond 1e-10");
  HermitianEig eig = hermitian_eig(0.5 * (rho + rho.adjoint()));
  if (eig.eigenvalues.minCoeff() < -kValidityTol)
    throw InvalidDensityMatrix("density matrix has an eigenvalue below -1e-10");
  return eig;
}

double binary_entropy_bits(double x) {
  double s = 0.0;
  for (double p : {x, 1.0 - x})
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

}  // namespace

QubitMapping::QubitMapping(const std::array<int, 4>& perm) : permutation(perm) {
  std::array<bool, 4> seen{};
  for (int v : perm) {
    if (v < 0 || v > 3 || seen[v])
      throw OutOfRange("QubitMapping: not a permutation of {0,1,2,3}");
    seen[v] = true;
  }
}

ComplexMatrix spin_flip_matrix() {
  ComplexMatrix g = ComplexMatrix::Zero(4, 4);
  g(0, 3) = -1.0;
  g(1, 2) = 1.0;
  g(2, 1) = 1.0;
  g(3, 0) = -1.0;
  return g;
}

ComplexMatrix spin_flip(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw BadDimension("spin_flip: expected a 4x4 matrix");
  const ComplexMatrix g = spin_flip_matrix();
  return g * rho.conjugate() * g;
}

ConcurrenceResult concurrence(const ComplexMatrix& rho,
                              const QubitMapping& mapping) {
  const ComplexMatrix rq = permute_to_qubit_basis(rho, mapping);
  const HermitianEig eig = validate_density_matrix(rq);

  // Literal route: eigenvalues of R = rho * rho_tilde screen the spectrum.
  const ComplexMatrix r_product = rq * spin_flip(rq);
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(r_product, /*computeEigenvectors=*/false);
  if (ces.info() != Eigen::Success)
    throw Error("concurrence: eigensolver failed on rho*rho_tilde");
  for (int k = 0; k < 4; ++k) {
    const Complex ev = ces.eigenvalues()(k);
    if (ev.real() < -kSpectrumReject || std::abs(ev.imag()) > kSpectrumReject)
      throw NonphysicalSpectrum(
          "concurrence: rho*rho_tilde has an eigenvalue outside the physical range");
  }

  // Stable route supplies the returned values: with rho = L L^dagger the
  // nu_i are the singular values of B = L^T G L (B is complex symmetric and
  // conj(B) B is similar to R).
  ComplexMatrix l = eig.eigenvectors;
  for (int k = 0; k < 4; ++k)
    l.col(k) *= std::sqrt(std::max(eig.eigenvalues(k), 0.0));
  const ComplexMatrix b = l.transpose() * spin_flip_matrix() * l;
  Eigen::JacobiSVD<ComplexMatrix> svd(b);

  ConcurrenceResult out;
  for (int k = 0; k < 4; ++k)
    out.nu[k] = svd.singularValues()(k);  // Eigen orders descending, >= 0
  const double c = out.nu[0] - out.nu[1] - out.nu[2] - out.nu[3];
  out.c = std::clamp(c, 0.0, 1.0);
  return out;
}

double entanglement_of_formation(double c) {
  // tolerate last-bit excursions from upstream arithmetic
  if (c < -1e-12 || c > 1.0 + 1e-12)
    throw OutOfRange("entanglement_of_formation: concurrence outside [0, 1]");
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  return binary_entropy_bits(x);
}

double subsystem_entropy(const ComplexMatrix& rho, Subsystem keep,
                         const QubitMapping& mapping) {
  const ComplexMatrix rq = permute_to_qubit_basis(rho, mapping);
  validate_density_matrix(rq);
  const ComplexMatrix reduced = partial_trace(rq, keep);
  const HermitianEig eig = hermitian_eig(reduced);
  double s = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double p = std::clamp(eig.eigenvalues(k), 0.0, 1.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

EntanglementReport measure_all(const ComplexMatrix& rho,
                               const QubitMapping& mapping) {
  EntanglementReport rep;
  const ConcurrenceResult cr = concurrence(rho, mapping);
  rep.concurrence = cr.c;
  rep.nu = cr.nu;
  rep.eof = entanglement_of_formation(cr.c);
  rep.entropy_a = subsystem_entropy(rho, Subsystem::A, mapping);
  rep.entropy_b = subsystem_entropy(rho, Subsystem::B, mapping);
  return rep;
}

}  // namespace nqrent
