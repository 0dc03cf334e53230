#pragma once

#include <array>

#include "nqrent/spin_algebra.hpp"

namespace nqrent {

/// Identification of the four spin-3/2 levels |3/2>, |1/2>, |-1/2>, |-3/2>
/// (indices 0..3) with the two-qubit basis |00>, |01>, |10>, |11>.
/// permutation[spin_index] = qubit_index. Default: identity (descending m
/// reads off as lexicographic bits).
struct QubitMapping {
  std::array<int, 4> permutation{0, 1, 2, 3};

  QubitMapping() = default;
  explicit QubitMapping(const std::array<int, 4>& perm);

  bool is_identity() const { return permutation == std::array<int, 4>{0, 1, 2, 3}; }
};

/// The two-qubit spin-flip matrix G (= sigma_y x sigma_y up to phase
/// convention): antidiagonal (-1, 1, 1, -1).
ComplexMatrix spin_flip_matrix();

/// rho_tilde = G conj(rho) G.
ComplexMatrix spin_flip(const ComplexMatrix& rho);

struct ConcurrenceResult {
  double c = 0.0;
  std::array<double, 4> nu{};  // descending, >= 0
};

/// Wootters concurrence of a two-qubit density matrix. nu are the square
/// roots of the eigenvalues of R = rho * rho_tilde, descending;
/// C = max(0, nu1 - nu2 - nu3 - nu4).
///
/// The spectrum of R is screened with a general eigensolve (rejecting
/// eigenvalues below -1e-8 or with imaginary part above 1e-8 as
/// NonphysicalSpectrum); the returned values come from the equivalent
/// factored form nu = singular values of L^T G L with rho = L L^dagger,
/// which is stable for nearly singular states.
ConcurrenceResult concurrence(const ComplexMatrix& rho,
                              const QubitMapping& mapping = {});

/// Entanglement of formation from the concurrence:
/// E = h2((1 + sqrt(1 - C^2)) / 2) in bits, with h2 the binary entropy.
double entanglement_of_formation(double c);

/// Von Neumann entropy (bits) of the reduced state of one qubit.
double subsystem_entropy(const ComplexMatrix& rho, Subsystem keep,
                         const QubitMapping& mapping = {});

struct EntanglementReport {
  double concurrence = 0.0;
  double eof = 0.0;
  double entropy_a = 0.0;
  double entropy_b = 0.0;
  std::array<double, 4> nu{};
};

/// All measures of one state in a single pass.
EntanglementReport measure_all(const ComplexMatrix& rho,
                               const QubitMapping& mapping = {});

}  // namespace nqrent
