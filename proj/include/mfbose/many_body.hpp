#pragma once

#include <string>
#include <vector>

#include "mfbose/bogoliubov.hpp"
#include "mfbose/eigensolvers.hpp"
#include "mfbose/fock_basis.hpp"
#include "mfbose/mode_model.hpp"

namespace mfbose {

/// Second-quantized operator restricted to a Fock basis.
struct ManyBodyOperator {
  FockBasis basis;
  SpMat matrix;
  double lambda = 0.0;
  std::string description;

  int dimension() const { return basis.size(); }
  /// max |H - H^dag|.
  double hermiticity_defect() const;
};

/// Default cap on stored non-zeros.
inline constexpr std::size_t kMaxNonzeros = 2'000'000;

/// sum h_mp a_m^dag a_p + (lambda/2) sum W_mnpq a_m^dag a_n^dag a_q a_p on the basis,
/// which must be closed under the action (throws otherwise).
ManyBodyOperator build_hamiltonian(const ModeModel& m, const FockBasis& basis, double lambda,
                                   std::size_t max_nonzeros = kMaxNonzeros);
/// Full N-particle sector with lambda = 1/(N-1) (lambda = 0 for N = 1).
ManyBodyOperator build_hamiltonian(const ModeModel& m, int N);

/// Total momentum sectors of the N-particle space of a translation-invariant model,
/// keyed by the total momentum label reduced modulo the grid.
struct MomentumSector {
  std::array<int, 2> momentum{};
  FockBasis basis;
};
std::vector<MomentumSector> momentum_sectors(const ModeModel& m, int N);

/// Lowest J eigenvalues of H_N with lambda = 1/(N-1), merging momentum sectors
/// when the model is translation invariant.
std::vector<double> many_body_spectrum(const ModeModel& m, int N, int J, const EigenOptions& opts = {});

struct GroundState {
  FockBasis basis;  ///< full N-particle basis
  CVec psi;
  double energy = 0.0;
};
/// Ground state of H_N (lambda = 1/(N-1)) embedded in the full N-particle basis.
GroundState many_body_ground_state(const ModeModel& m, int N, const EigenOptions& opts = {});

/// (sum_m c_m a_m^dag)^N / sqrt(N!) |0>, i.e. the coefficients of c^{(x)N}.
CVec product_state(const FockBasis& basis, const CVec& c);

/// dGamma(G) = sum G_jm a_j^dag a_m on the basis.
SpMat second_quantize(const FockBasis& basis, const CMat& G);

/// sum A_ij b_i^dag b_j + (1/2) sum (B_ij b_i^dag b_j^dag + h.c.) projected on
/// the states with at most n_max excitations. The pairing terms conserve the
/// parity of the excitation number, so the even sector can be taken alone.
ManyBodyOperator quadratic_fock_hamiltonian(const QuadraticHamiltonian& q, int n_max, bool even_only = false);

/// Copy a vector given on a sub-basis into the coefficients of a larger basis.
CVec embed(const FockBasis& from, const CVec& v, const FockBasis& into);

}  // namespace mfbose
