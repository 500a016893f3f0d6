#pragma once

#include <vector>

#include "mfbose/density_matrix.hpp"
#include "mfbose/excitations.hpp"

namespace mfbose {

struct BoundViolation : Error { using Error::Error; };

struct EnergyBoundsReport {
  int N = 0;
  double energy_per_particle = 0.0;
  double e_gp = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// e_GP - E(N)/N.
  double gap = 0.0;
  bool holds = false;
};

/// e_GP - (w_1(0) + w_2(0))/(N - 3) <= E(N)/N <= e_GP (N >= 4), with a
/// relative slack of 1e-10 for roundoff. Throws BoundViolation when strict.
EnergyBoundsReport energy_bounds_check(double E, int N, double e_gp, double w_abs_sum, bool strict = false);

/// <Psi, sum h_j Psi> - N <sqrt(rho), h sqrt(rho)> for a grid-localized mode
/// set, where rho is the diagonal of the one-body density matrix.
double hoffmann_ostenhof_slack(const ReducedDensityMatrix& g1, const CMat& h, int N);

/// sum_{j<k} w(x_j - x_k) - [sum_j (eta * w)(x_j) - (1/2) iint w eta eta - (N/2) w(0)]
/// for one classical configuration; eta given by grid samples.
double interaction_lower_bound_slack(const Interaction& w, const RVec& eta, const std::vector<Point>& x);

/// eta = sum_j delta_{x_j} on the grid, with x_j grid points given by index.
RVec point_masses(const ModelSpace& sp, const std::vector<int>& cells);

struct LadderPoint {
  int N = 0;
  double e_gp = 0.0;
  std::vector<double> levels;     ///< lambda_j(H_N) - N e_GP
  std::vector<double> reference;  ///< lambda_j(H_0)
  std::vector<double> deltas;
  double overlap = 0.0;   ///< |<U_N Psi_N, Phi>|
  double distance = 0.0;  ///< ||U_N Psi_N - Phi|| after phase alignment
};

struct SpectrumConvergenceReport {
  double eta_min = 0.0;
  double gap = 0.0;  ///< e_1 of the Bogoliubov spectrum
  double vacuum_truncation = 0.0;
  std::vector<LadderPoint> ladder;
  bool deltas_decreasing = false;
  bool overlap_increasing = false;
};

/// Excitation spectra of H_N against the quadratic Hamiltonian on an N-ladder
/// (static convention: GP coupling 1 and lambda = 1/(N-1)).
/// Throws DegenerateGP when the mode-space GP minimizer is not unique.
SpectrumConvergenceReport excitation_spectrum_convergence(const ModeModel& m, const std::vector<int>& Ns,
                                                          int J, int n_max = 12, std::uint64_t seed = 0);

}  // namespace mfbose
