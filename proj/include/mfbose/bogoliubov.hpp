#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfbose/gp_solver.hpp"

namespace mfbose {

/// Bogoliubov blocks on the orthogonal complement of the condensate.
///
/// With C an orthonormal basis of {psi}^perp (columns in the ambient
/// orthonormal basis), A = C^dag A_full C and B = C^dag B_full conj(C).
/// The second variation of the GP energy along u(t) = (u0 + t C a)/norm is
/// t^2 (a^dag A a + Re(a^dag B conj(a))).
struct QuadraticHamiltonian {
  CMat A;
  CMat B;
  /// Complement basis C, ambient dimension x (ambient dimension - 1).
  CMat complement;
  /// Condensate in the ambient orthonormal basis.
  CVec condensate;
  /// Coupling multiplying the interaction blocks.
  double coupling = 1.0;
  /// ||h0 psi|| at construction.
  double h0_residual = 0.0;
  /// iint w^2 |u0|^2 |u0|^2, finite on any grid.
  double kernel_norm = 0.0;

  int modes() const { return static_cast<int>(A.rows()); }
  /// [[A, B], [conj(B), conj(A)]].
  CMat doubled() const;
};

/// Assemble from full ambient blocks A_full = h0 + g K1~, B_full = g K2~.
QuadraticHamiltonian make_quadratic(const CMat& A_full, const CMat& B_full, const CVec& psi,
                                    double coupling);

/// Householder basis of {psi}^perp: columns 1.. of the reflector mapping psi to e0.
CMat complement_basis(const CVec& psi);
/// Full unitary whose first column is psi and remaining columns complement_basis(psi).
CMat condensate_frame(const CVec& psi);

/// Grid construction at a GP solution (u0 on the grid, eps0 its multiplier).
/// Throws ResidualTooLarge when the GP residual exceeds max_residual.
QuadraticHamiltonian build_hessian(const CVec& u0, const GPProblem& p, double eps0,
                                   double max_residual = 1e-8);

/// Smallest eigenvalue of the doubled matrix.
double check_nondegeneracy(const QuadraticHamiltonian& q);

struct BogoliubovSpectrum {
  RVec excitations;
  double ground_energy = 0.0;
  double eta_min = 0.0;
  bool valid = false;
};

/// Symplectic diagonalization: with doubled = L L^dag (Cholesky), the
/// Hermitian matrix L^dag sigma L has eigenvalues +-e_j.
/// Throws DegenerateHessian when eta_min <= 0.
BogoliubovSpectrum diagonalize(const QuadraticHamiltonian& q);

/// Positive eigenvalues of the dynamical matrix sigma * doubled, obtained
/// with a general non-symmetric eigensolver.
RVec dynamical_matrix_excitations(const QuadraticHamiltonian& q);

/// Lowest J values of E_Bog + sum_j n_j e_j over occupation multisets.
std::vector<double> excitation_ladder(const BogoliubovSpectrum& s, int J);

/// sqrt(|k|^4 + 2 (2 pi)^{d/2} (N-1) rho w_hat(k) |k|^2); rho is the
/// condensate density (1 for u0 = 1, 1/|Omega| for a unit-mass condensate).
/// Throws InstabilityAt when the radicand is negative.
double homogeneous_dispersion(double k, double w_hat, int N, int d = 1, double rho = 1.0);

enum class DispersionShape { Phonon, PhononMaxonRoton };
std::string to_string(DispersionShape s);

/// Curve e(k) sampled on increasing k >= 0.
DispersionShape classify_dispersion(const std::vector<double>& k, const std::vector<double>& e);

struct SecondOrderReport {
  double continuum = 0.0;
  std::vector<double> extents;
  std::vector<double> torus_sums;
  double extrapolated = 0.0;
  double relative_mismatch = 0.0;
};

/// Radial profile w_hat(|k|).
using RadialTransform = std::function<double(double)>;

/// w_hat of A exp(-|x|^2 / (2 s^2)) in d dimensions: A s^d exp(-s^2 k^2 / 2).
RadialTransform gaussian_transform(double amplitude, double width, int d);

/// -(2 (2 pi)^d)^{-1} int_{|k|<k_max} (|k|^2 + W - |k| sqrt(|k|^2 + 2 W)) dk,
/// W = (2 pi)^{d/2} w_hat. Throws NonIntegrable when the last octave
/// carries more than 1% of the integral.
double second_order_continuum(const RadialTransform& w_hat, int d, double k_max);

/// (2 L^d)^{-1} sum_{k != 0, |k| < k_max} (e(k) - |k|^2 - W(k)) on the lattice (2 pi/L) Z^d.
double second_order_torus_sum(const RadialTransform& w_hat, int d, double L, double k_max);

/// Continuum value against the torus sums on the given extents, Richardson
/// extrapolated assuming an error series in powers of 1/L.
SecondOrderReport second_order_correction(const RadialTransform& w_hat, int d,
                                          const std::vector<double>& extents, double k_max);

}  // namespace mfbose
