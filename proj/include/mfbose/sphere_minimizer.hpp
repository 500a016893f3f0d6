#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mfbose/common.hpp"

namespace mfbose {

/// Energy restricted to the points of the curve t -> u + t d,
/// E(t) = K(t)/n(t) + I(t)/n(t)^2 with n(t) = ||u + t d||^2.
/// K and I are polynomials of degree 2 and 4 in t.
struct LinePolynomial {
  std::array<double, 3> one_body{};
  std::array<double, 5> interaction{};
};

/// Quadratic-plus-quartic functional E(u) = <u, h u> + Q(u) on a unit sphere.
class SphereFunctional {
 public:
  virtual ~SphereFunctional() = default;

  virtual int dimension() const = 0;
  virtual cplx inner(const CVec& a, const CVec& b) const = 0;
  virtual double energy(const CVec& u) const = 0;
  /// H_u u where H_u is the mean-field operator; E has Wirtinger gradient 2 H_u u.
  virtual CVec mean_field_apply(const CVec& u) const = 0;
  virtual LinePolynomial line_polynomial(const CVec& u, const CVec& d) const = 0;
  /// Symmetric positive preconditioner at the point u; identity by default.
  virtual CVec precondition(const CVec& u, const CVec& r, double shift) const;
  /// Gauge-fixed candidate for u (for real positivity-preserving h: |u|).
  /// The minimizer adopts it only when the energy does not increase.
  virtual bool modulus_candidate(const CVec& u, CVec& out) const;
  /// Starting point for restart 0.
  virtual CVec initial_guess() const = 0;
  /// Smoothed random starting point.
  virtual CVec random_guess(Rng& rng) const = 0;

  double norm(const CVec& u) const { return std::sqrt(inner(u, u).real()); }
  void normalize(CVec& u) const;
};

enum class DescentMethod { Gradient, ConjugateGradient };

struct MinimizerOptions {
  double tol_resid = 1e-9;
  int max_iter = 50000;
  DescentMethod method = DescentMethod::ConjugateGradient;
  bool precondition = true;
  /// Conjugate-gradient memory is dropped every this many iterations.
  int restart_period = 100;
  /// Iterations between attempts to adopt the modulus candidate (0 = never).
  int polish_period = 200;
  /// Stop when the energy moves by less than this over the window.
  double energy_window_tol = 1e-12;
  int energy_window = 50;
  bool record_trace = false;
};

struct MinimizerResult {
  CVec u;
  double energy = 0.0;
  /// Lagrange multiplier <u, H_u u>.
  double multiplier = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
};

/// Riemannian descent on the unit sphere with exact line search along the
/// normalized curve and Armijo acceptance.
MinimizerResult minimize_on_sphere(const SphereFunctional& f, CVec u0,
                                   const MinimizerOptions& opts);

/// Projected residual r = H_u u - <u, H_u u> u and the multiplier.
CVec sphere_residual(const SphereFunctional& f, const CVec& u, double* multiplier = nullptr);

}  // namespace mfbose
