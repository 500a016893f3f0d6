#include "mfbose/sphere_minimizer.hpp"

#include <cmath>
#include <limits>

namespace mfbose {

CVec SphereFunctional::precondition(const CVec&, const CVec& r, double) const { return r; }

bool SphereFunctional::modulus_candidate(const CVec&, CVec&) const { return false; }

void SphereFunctional::normalize(CVec& u) const {
  const double n = norm(u);
  if (n == 0.0) throw Error("cannot normalize the zero vector");
  u /= n;
}

CVec sphere_residual(const SphereFunctional& f, const CVec& u, double* multiplier) {
  CVec hu = f.mean_field_apply(u);
  const double mu = f.inner(u, hu).real();
  if (multiplier) *multiplier = mu;
  hu -= mu * u;
  return hu;
}

namespace {

struct LineModel {
  // E(t) - E(0) = num(t) / (1 + b2 t^2)^2
  std::array<double, 5> num{};
  double b2 = 0.0;

  double operator()(double t) const {
    double p = 0.0;
    for (int i = 4; i >= 0; --i) p = p * t + num[i];
    const double n = 1.0 + b2 * t * t;
    return p / (n * n);
  }
};

LineModel make_model(const LinePolynomial& lp, double b2) {
  const auto& k = lp.one_body;
  const auto& I = lp.interaction;
  const double e0 = k[0] + I[0];
  LineModel m;
  m.b2 = b2;
  m.num = {0.0, k[1] + I[1], k[2] + k[0] * b2 + I[2] - 2.0 * e0 * b2, k[1] * b2 + I[3],
           k[2] * b2 + I[4] - e0 * b2 * b2};
  return m;
}

/// Step length minimizing the model, subject to the Armijo condition.
double line_search(const LineModel& f) {
  const double slope = f.num[1];
  if (!(slope < 0.0)) return 0.0;
  constexpr double c1 = 1e-4;
  double tref = f.num[2] > 0.0 ? -slope / (2.0 * f.num[2]) : 1.0 / std::sqrt(f.b2);
  if (!std::isfinite(tref) || tref <= 0.0) tref = 1.0 / std::sqrt(f.b2);

  double best_t = 0.0, best_f = 0.0;
  int best_j = 0;
  for (int j = -30; j <= 12; ++j) {
    const double t = tref * std::ldexp(1.0, j);
    const double v = f(t);
    if (v < best_f) {
      best_f = v;
      best_t = t;
      best_j = j;
    }
  }
  if (best_t > 0.0) {
    // Golden-section refinement inside the bracketing neighbours.
    double a = tref * std::ldexp(1.0, best_j - 1), b = tref * std::ldexp(1.0, best_j + 1);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = f(x2);
      }
    }
    const double tm = f1 < f2 ? x1 : x2;
    if (f(tm) < best_f) best_t = tm;
  } else {
    best_t = tref;
  }
  // Backtracking safeguard.
  double t = best_t;
  for (int it = 0; it < 80; ++it) {
    if (f(t) <= c1 * t * slope) return t;
    t *= 0.5;
  }
  return 0.0;
}

}  // namespace

MinimizerResult minimize_on_sphere(const SphereFunctional& f, CVec u, const MinimizerOptions& opts) {
  f.normalize(u);
  MinimizerResult res;
  double mu = 0.0;
  CVec r = sphere_residual(f, u, &mu);
  double rnorm = f.norm(r);
  double energy = f.energy(u);
  std::vector<double> energies{energy}, residuals{rnorm};
  if (opts.record_trace) res.energy_trace.push_back(energy);

  CVec z, d, z_prev, r_prev;
  double rz_prev = 0.0;
  int it = 0;
  for (; it < opts.max_iter && rnorm > opts.tol_resid; ++it) {
    if (opts.polish_period > 0 && it > 0 && it % opts.polish_period == 0) {
      CVec cand;
      if (f.modulus_candidate(u, cand)) {
        f.normalize(cand);
        const double ec = f.energy(cand);
        if (ec <= energy) {
          u = cand;
          energy = ec;
          r = sphere_residual(f, u, &mu);
          rnorm = f.norm(r);
          rz_prev = 0.0;  // forces a steepest-descent restart
          if (rnorm <= opts.tol_resid) break;
        }
      }
    }
    const double shift = std::max(1.0, std::abs(mu));
    z = opts.precondition ? f.precondition(u, r, shift) : r;
    z -= u * f.inner(u, z);
    const double rz = f.inner(r, z).real();

    bool restart = opts.method == DescentMethod::Gradient || it == 0 || rz_prev <= 0.0 ||
                   (opts.restart_period > 0 && it % opts.restart_period == 0);
    CVec zp;
    if (!restart) {
      zp = z_prev - u * f.inner(u, z_prev);
      // Powell restart when successive residuals lose orthogonality.
      restart = std::abs(f.inner(r, zp).real()) >= 0.2 * rz;
    }
    if (!restart) {
      // Polak-Ribiere+ with vector transport by projection.
      const double beta = std::max(0.0, f.inner(r, z - zp).real() / rz_prev);
      d -= u * f.inner(u, d);
      d = -z + beta * d;
      if (f.inner(r, d).real() >= 0.0) d = -z;
    } else {
      d = -z;
    }

    LinePolynomial lp = f.line_polynomial(u, d);
    double t = line_search(make_model(lp, f.inner(d, d).real()));
    if (t == 0.0 && opts.method == DescentMethod::ConjugateGradient) {
      d = -z;
      lp = f.line_polynomial(u, d);
      t = line_search(make_model(lp, f.inner(d, d).real()));
    }
    if (t == 0.0) break;  // no representable decrease left

    u += t * d;
    f.normalize(u);
    z_prev = z;
    rz_prev = rz;
    r = sphere_residual(f, u, &mu);
    rnorm = f.norm(r);
    energy = f.energy(u);
    energies.push_back(energy);
    residuals.push_back(rnorm);
    if (opts.record_trace) res.energy_trace.push_back(energy);

    const int w = opts.energy_window;
    const std::size_t n = energies.size();
    if (w > 0 && n > static_cast<std::size_t>(w)) {
      const double de = std::abs(energies[n - 1 - w] - energies[n - 1]);
      const bool flat = de < opts.energy_window_tol * std::max(1.0, std::abs(energy));
      const bool stuck = residuals[n - 1] > 0.5 * residuals[n - 1 - w];
      if (flat && stuck) {
        ++it;
        break;
      }
    }
  }
  res.u = u;
  res.energy = energy;
  res.multiplier = mu;
  res.residual = rnorm;
  res.iterations = it;
  res.converged = rnorm <= opts.tol_resid;
  return res;
}

}  // namespace mfbose
