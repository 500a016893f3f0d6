#pragma once

#include <vector>

#include "mfbose/many_body.hpp"

namespace mfbose {

/// Hermitian G with exp(i G) = U for unitary U.
CMat unitary_log(const CMat& U);

/// Gamma(U) psi: the many-body action of a one-particle unitary U on a
/// fixed-N state, so that a product state c^{(x)N} maps to (U c)^{(x)N}.
CVec apply_mode_rotation(const FockBasis& basis, const CMat& U, const CVec& psi);

/// Components phi_n of U_N Psi on the n-particle spaces over the modes
/// orthogonal to u0 (modes 1..M-1 of the condensate frame).
struct ExcitationVector {
  CVec reference;
  std::vector<FockBasis> sectors;  ///< sectors[n] = FockBasis::fixed(M - 1, n)
  std::vector<CVec> components;

  double norm2() const;
  /// ||phi_n||^2 for n = 0..N.
  std::vector<double> weights() const;
};

ExcitationVector excitation_decompose(const FockBasis& basis, const CVec& psi, const CVec& u0);
CVec excitation_recompose(const ExcitationVector& x, const FockBasis& basis);

/// Coefficients of an excitation vector on a truncated Fock basis over the
/// same M - 1 modes (components outside it are dropped).
CVec excitation_on(const ExcitationVector& x, const FockBasis& truncated);

struct BogoliubovVacuum {
  FockBasis basis = FockBasis::truncated(1, 0);
  CVec phi;
  double energy = 0.0;
  /// |lambda_1(n_max) - lambda_1(n_max - 2)|, an estimate of the truncation error.
  double truncation_error = 0.0;
  /// Weight of phi on the top two excitation numbers.
  double tail_weight = 0.0;
};

/// Ground state of the quadratic Hamiltonian on F_+^{<= n_max}.
BogoliubovVacuum bogoliubov_vacuum(const QuadraticHamiltonian& q, int n_max, int J = 1,
                                   std::vector<double>* levels = nullptr);

}  // namespace mfbose
