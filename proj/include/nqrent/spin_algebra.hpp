#pragma once

#include "nqrent/errors.hpp"
#include "nqrent/types.hpp"

namespace nqrent {

/// A spin-I system described by two_I = 2I, so half-integer spins stay exact.
/// The Hilbert-space dimension is 2I+1; I = 3/2 gives the 4-level system this
/// library spends most of its time on.
struct SpinSystem {
  int two_I;

  explicit SpinSystem(int two_I_) : two_I(two_I_) {
    if (two_I < 1) throw OutOfRange("SpinSystem: two_I must be >= 1");
  }

  double spin() const { return 0.5 * two_I; }
  int dim() const { return two_I + 1; }
};

/// Angular-momentum matrices in the |I, m> basis ordered by descending m
/// (so iz = diag(I, I-1, ..., -I)). All in units of hbar.
struct SpinOperators {
  ComplexMatrix ix, iy, iz, i_plus, i_minus, i_squared;
};

SpinOperators spin_operators(const SpinSystem& spin);

struct HermitianEig {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

/// Dense Hermitian eigendecomposition, m = V diag(w) V^dagger.
/// Throws NotHermitian if m deviates from Hermitian by more than
/// kHermitianTol elementwise, BadDimension above 16x16.
HermitianEig hermitian_eig(const ComplexMatrix& m);

/// exp(scale * m) for Hermitian m, via the eigendecomposition.
ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m, double scale);

enum class Subsystem { A, B };

/// Partial trace of a two-qubit (4x4) density matrix. Index convention:
/// row r = 2a + b where a is the A-qubit bit and b the B-qubit bit.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep);

}  // namespace nqrent
