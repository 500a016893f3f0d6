#pragma once

#include <cstdint>
#include <vector>

#include "mfbose/lattice_model.hpp"
#include "mfbose/sphere_minimizer.hpp"

namespace mfbose {

/// E(u) = <u, h u> + (g/2) iint w(x-y) |u(x)|^2 |u(y)|^2 on the grid.
struct GPProblem {
  GPProblem(OneBodyOperator h, Interaction w, double g);

  const SpacePtr& space() const { return h.space(); }

  OneBodyOperator h;
  Interaction w;
  double g = 1.0;
};

/// Grid realization of the GP functional for the sphere minimizer.
class GridFunctional final : public SphereFunctional {
 public:
  explicit GridFunctional(const GPProblem& p, double smoothing_modes = 8.0)
      : p_(p), smoothing_modes_(smoothing_modes) {}

  int dimension() const override { return p_.space()->size(); }
  cplx inner(const CVec& a, const CVec& b) const override { return p_.space()->inner(a, b); }
  double energy(const CVec& u) const override;
  CVec mean_field_apply(const CVec& u) const override;
  LinePolynomial line_polynomial(const CVec& u, const CVec& d) const override;
  /// a (a + V)^{-1/2} (a - Laplacian)^{-1} (a + V)^{-1/2} with V the
  /// mean-field potential at u shifted to a zero minimum.
  CVec precondition(const CVec& u, const CVec& r, double shift) const override;
  bool modulus_candidate(const CVec& u, CVec& out) const override;
  CVec initial_guess() const override;
  CVec random_guess(Rng& rng) const override;

 private:
  const GPProblem& p_;
  double smoothing_modes_;
};

double gp_energy(const CVec& u, const GPProblem& p);
/// Interaction part (g/2) iint w rho rho.
double gp_interaction_energy(const CVec& u, const GPProblem& p);
/// Sphere-projected gradient (1 - |u><u|)(h u + g (w * |u|^2) u).
/// For tangent v, d/dt E(u + t v) at 0 equals 2 Re <gp_gradient, v>.
CVec gp_gradient(const CVec& u, const GPProblem& p);

struct GPOptions {
  int restarts = 8;
  double tol_resid = 1e-9;
  int max_iter = 50000;
  std::uint64_t seed = 0;
  DescentMethod method = DescentMethod::ConjugateGradient;
  int energy_window = 50;
  int threads = 1;
  /// Basin hopping inside each restart: re-minimize from u + a xi with xi a
  /// fresh smoothed random field, keep the lower minimum, stop after
  /// hop_patience consecutive non-improving hops. Zero disables it.
  int hops = 0;
  double hop_amplitude = 3.0;
  int hop_patience = 10;
  /// Random initial fields keep modes up to about this many wavelengths per box.
  double smoothing_modes = 8.0;
};

struct GPRestart {
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int hops_accepted = 0;
  bool converged = false;
};

struct GPSolution {
  CVec u0;
  double e_gp = 0.0;
  double eps0 = 0.0;
  double residual = 0.0;
  int restarts_used = 0;
  int best_restart = 0;
  bool degenerate = false;
  /// Densities of all distinct minimizers at the best energy; the first is |u0|^2.
  std::vector<RVec> distinct_densities;
  std::vector<GPRestart> restarts;
  std::vector<double> energy_trace;
};

/// Multi-restart minimization. Restart 0 starts from the ground mode of h,
/// the others from smoothed complex Gaussian fields.
GPSolution solve_gp(const GPProblem& p, const GPOptions& opts);

/// Coupling of the unit-mass functional equivalent to the thermodynamic
/// functional at density rho on the box: g = rho |Omega|.
double thermodynamic_coupling(double rho, const ModelSpace& space);

struct ScalingReport {
  double lambda = 1.0;
  double e_reference = 0.0;
  double e_scaled = 0.0;
  double mismatch = 0.0;
};

/// Compares e_GP(rho lambda, w / lambda) with e_GP(rho, w), each solved
/// independently on the unit sphere.
ScalingReport check_scaling_identity(const OneBodyOperator& h, const Interaction& w, double rho,
                                     double lambda, const GPOptions& opts);

struct DensityShape {
  int interior_maxima = 0;
  /// (max - min) / max over the span between the outermost maxima.
  double contrast = 0.0;
  bool symmetry_broken = false;
};

/// Shape of a 1D density profile.
DensityShape analyze_density(const RVec& rho, double rel_threshold = 1e-3);

}  // namespace mfbose
