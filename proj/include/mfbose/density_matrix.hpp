#pragma once

#include "mfbose/fock_basis.hpp"

namespace mfbose {

/// k-body density matrix on the symmetric k-particle space, written in the
/// orthonormal occupation basis of that space and normalized to trace 1:
/// Gamma_ab = <Psi, A_b^dag A_a Psi> / C(N, k) with A_a the normalized
/// k-particle annihilator of occupation a.
struct ReducedDensityMatrix {
  int order = 1;
  FockBasis basis = FockBasis::fixed(1, 1);
  CMat matrix;

  double trace() const { return matrix.trace().real(); }
  /// Smallest eigenvalue (PSD check).
  double min_eigenvalue() const;
  /// Eigenvalues in descending order.
  RVec occupations() const;
};

ReducedDensityMatrix reduced_density_matrix(const FockBasis& basis, const CVec& psi, int k);

/// Partial trace over one particle: Gamma^{(k)} -> Gamma^{(k-1)}.
ReducedDensityMatrix partial_trace(const ReducedDensityMatrix& g);

/// Largest eigenvalue of a one-body density matrix.
double condensate_fraction(const ReducedDensityMatrix& g1);

}  // namespace mfbose
