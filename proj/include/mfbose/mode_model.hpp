#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mfbose/bogoliubov.hpp"
#include "mfbose/gp_solver.hpp"

namespace mfbose {

/// Finite orthonormal mode set {phi_m} with one-body matrix h_mp = <phi_m, h phi_p>
/// and two-body tensor W_mnpq = iint conj(phi_m(x) phi_n(y)) w(x-y) phi_p(x) phi_q(y).
struct ModeModel {
  SpacePtr space;
  /// Grid samples of the modes, one column per mode.
  CMat modes;
  CMat h;
  std::vector<cplx> W;
  /// Integer momentum labels when the modes are plane waves; empty otherwise.
  std::vector<std::array<int, 2>> momenta;
  /// w_1(0) + w_2(0) for the splitting into positive and negative Fourier parts.
  double w_abs_sum = 0.0;

  int size() const { return static_cast<int>(h.rows()); }
  cplx w(int m, int n, int p, int q) const {
    const std::size_t M = static_cast<std::size_t>(size());
    return W[((m * M + n) * M + p) * M + q];
  }
  bool translation_invariant() const { return !momenta.empty(); }

  /// Generic construction by grid quadrature.
  static ModeModel from_modes(const OneBodyOperator& h, const Interaction& w, CMat modes);
  /// The M plane waves of smallest |k| on a periodic space; entries that
  /// violate momentum conservation are set to exactly zero.
  static ModeModel plane_waves(const OneBodyOperator& h, const Interaction& w, int M);
  /// The M lowest eigenmodes of h.
  static ModeModel eigenmodes(const OneBodyOperator& h, const Interaction& w, int M);
  /// One mode per grid cell with the nearest-neighbour kinetic matrix, whose
  /// off-diagonal entries are non-positive.
  static ModeModel grid_localized(const OneBodyOperator& h, const Interaction& w);
};

/// E(c) = c^dag h c + (g/2) sum W_mnpq conj(c_m c_n) c_p c_q on the unit sphere of C^M.
class ModeFunctional final : public SphereFunctional {
 public:
  ModeFunctional(const ModeModel& m, double g) : m_(m), g_(g) {}

  int dimension() const override { return m_.size(); }
  cplx inner(const CVec& a, const CVec& b) const override { return a.dot(b); }
  double energy(const CVec& c) const override;
  CVec mean_field_apply(const CVec& c) const override;
  LinePolynomial line_polynomial(const CVec& c, const CVec& d) const override;
  CVec initial_guess() const override;
  CVec random_guess(Rng& rng) const override;

  /// sum_npq W_mnpq conj(a_n) b_p c_q.
  CVec contract(const CVec& a, const CVec& b, const CVec& c) const;
  /// sum W_mnpq P_mp R_nq.
  cplx pair_form(const CMat& P, const CMat& R) const;

 private:
  const ModeModel& m_;
  double g_;
};

struct ModeGPSolution {
  CVec c;
  double e_gp = 0.0;
  double eps0 = 0.0;
  double residual = 0.0;
  bool degenerate = false;
  int converged_restarts = 0;
};

/// Multi-restart minimization over span of the modes. Two converged restarts
/// at the same energy (1e-8) count as distinct minimizers when their
/// one-body projectors c c^dag differ by more than 1e-4.
ModeGPSolution solve_mode_gp(const ModeModel& m, double g, int restarts = 8,
                             std::uint64_t seed = 0, double tol_resid = 1e-11);

/// MF_mp = sum W_mnpq conj(c_n) c_q, K1_mq = sum W_mnpq conj(c_n) c_p, K2_mn = sum W_mnpq c_p c_q.
struct MeanFieldBlocks {
  CMat MF;
  CMat K1;
  CMat K2;
};
MeanFieldBlocks mean_field_blocks(const ModeModel& m, const CVec& c);

/// Bogoliubov blocks of the mode-space GP functional at c (multiplier eps0).
QuadraticHamiltonian mode_quadratic(const ModeModel& m, double g, const CVec& c, double eps0);

}  // namespace mfbose
