#pragma once

#include <vector>

#include "mfbose/excitations.hpp"
#include "mfbose/gp_solver.hpp"
#include "mfbose/many_body.hpp"
#include "mfbose/mode_model.hpp"

namespace mfbose {

/// Samples of a time-dependent GP solution. The gauge term
/// epsilon(t) = (g/2) iint |u|^2 |u|^2 w is kept in the equation.
struct GPTrajectory {
  std::vector<double> t;
  std::vector<CVec> u;
  std::vector<double> epsilon;
  std::vector<double> norm;
  std::vector<double> energy;
  double dt = 0.0;  ///< step actually used after halving

  double max_norm_drift() const;
  double max_energy_drift() const;  ///< relative to |E(0)|
};

struct DriftLimits {
  double norm = 1e-8;
  double energy = 1e-6;
  double min_dt = 1e-8;
};

/// i du/dt = (h + g |u|^2 * w - epsilon(t)) u on a periodic grid with a fourth
/// order (Yoshida) composition of Strang split steps. The step is halved and
/// the run repeated until both drifts are within limits; StepCollapse below
/// limits.min_dt. Snapshots are stored every `stride` steps.
GPTrajectory evolve_gp(const CVec& u0, const GPProblem& p, double T, double dt, int stride = 1,
                       const DriftLimits& limits = {});

/// The same flow restricted to the span of the model's modes,
/// i dc/dt = (h + g MF(c) - epsilon) c, integrated with RK4 and sampled at dt/2.
GPTrajectory evolve_gp_modes(const ModeModel& m, double g, const CVec& c0, double T, double dt,
                             const DriftLimits& limits = {});

/// Fluctuation vector over all M modes on the states with at most n_max particles.
struct BogoliubovTrajectory {
  FockBasis basis = FockBasis::truncated(1, 0);
  std::vector<double> t;
  std::vector<CVec> phi;
  std::vector<double> norm;
  /// <n_u(t)> of the state before the per-step projection.
  std::vector<double> u_occupancy;
  /// ||sector n||^2 of phi, n = 0..n_max.
  std::vector<std::vector<double>> sector_norms;
  double max_hermiticity_defect = 0.0;

  double max_u_occupancy() const;
  double max_norm_drift() const;
};

/// Time-dependent quadratic generator at condensate c with gauge epsilon:
/// A = h + g MF - epsilon + g Q K1 Q, B = g Q K2 conj(Q), Q = 1 - c c^dag.
QuadraticHamiltonian bogoliubov_generator(const ModeModel& m, double g, const CVec& c, double epsilon);

/// Integrates i dPhi/dt = H(t) Phi with RK4 using the trajectory samples at
/// t, t + dt/2, t + dt (so the step is twice the trajectory spacing).
/// The u(t)-mode component is projected out after every step.
/// Throws TruncationLeak when the top sector carries more than 1% of the norm.
BogoliubovTrajectory evolve_bogoliubov(const ModeModel& m, double g, const CVec& phi0,
                                       const GPTrajectory& traj, int n_max);

/// Vacuum of the fluctuation Fock space on truncated(M, n_max).
CVec fluctuation_vacuum(int M, int n_max);

/// sum_n u^{(x)(N-n)} (x)_s phi_n for phi given over all M modes (its
/// u-mode component is dropped), on the fixed-N basis.
CVec fluctuation_state(const FockBasis& basisN, const CVec& u, const FockBasis& fock, const CVec& phi);

struct ComparisonPoint {
  int N = 0;
  double t = 0.0;
  double distance = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonPoint> points;
  GPTrajectory gp;
  BogoliubovTrajectory bogoliubov;
  /// max |(||Psi_N(t)||) - 1| and max relative drift of <H_N> over the runs.
  double exact_norm_drift = 0.0;
  double exact_energy_drift = 0.0;
  /// D(N, t) strictly decreasing in N at every sampled t > 0.
  bool decreasing = false;

  double distance(int N, double t) const;
};

/// Exact H_N evolution (lambda = 1/(N-1), GP coupling 1) against the
/// condensate plus fluctuation ansatz on an N ladder.
ComparisonReport compare_exact(const ModeModel& m, const std::vector<int>& Ns, const CVec& u0,
                               const CVec& phi0, int n_max, double T, double dt,
                               const std::vector<double>& times);

}  // namespace mfbose
