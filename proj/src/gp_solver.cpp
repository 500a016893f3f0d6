#include "mfbose/gp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace mfbose {

GPProblem::GPProblem(OneBodyOperator h_, Interaction w_, double g_)
    : h(std::move(h_)), w(std::move(w_)), g(g_) {
  if (h.space().get() != w.space().get()) throw Error("GP problem: h and w live on different spaces");
  if (g < 0.0) throw ConfigError("GP coupling must be non-negative");
}

double gp_interaction_energy(const CVec& u, const GPProblem& p) {
  const RVec rho = u.cwiseAbs2();
  return 0.5 * p.g * p.space()->cell_volume() * rho.dot(p.w.convolve(rho));
}

double gp_energy(const CVec& u, const GPProblem& p) {
  return p.space()->inner(u, p.h.apply(u)).real() + gp_interaction_energy(u, p);
}

CVec gp_gradient(const CVec& u, const GPProblem& p) {
  GridFunctional f(p);
  return sphere_residual(f, u);
}

double GridFunctional::energy(const CVec& u) const { return gp_energy(u, p_); }

CVec GridFunctional::mean_field_apply(const CVec& u) const {
  CVec out = p_.h.apply(u);
  if (p_.g != 0.0) {
    const RVec field = p_.w.convolve(RVec(u.cwiseAbs2()));
    out.array() += p_.g * field.array() * u.array();
  }
  return out;
}

LinePolynomial GridFunctional::line_polynomial(const CVec& a, const CVec& b) const {
  const ModelSpace& sp = *p_.space();
  LinePolynomial lp;
  const CVec ha = p_.h.apply(a), hb = p_.h.apply(b);
  lp.one_body = {sp.inner(a, ha).real(), 2.0 * sp.inner(a, hb).real(), sp.inner(b, hb).real()};
  if (p_.g == 0.0) return lp;
  std::array<RVec, 3> rho{a.cwiseAbs2(), RVec(2.0 * (a.conjugate().array() * b.array()).real()),
                          b.cwiseAbs2()};
  std::array<RVec, 3> conv;
  for (int i = 0; i < 3; ++i) conv[i] = p_.w.convolve(rho[i]);
  auto m = [&](int i, int j) { return sp.cell_volume() * rho[i].dot(conv[j]); };
  const double g = p_.g;
  lp.interaction = {0.5 * g * m(0, 0), g * m(0, 1), 0.5 * g * (m(1, 1) + 2.0 * m(0, 2)), g * m(1, 2),
                    0.5 * g * m(2, 2)};
  return lp;
}

namespace {

/// (T + a)^{-1} applied in the transform basis of the space.
CVec kinetic_inverse(const ModelSpace& sp, const CVec& r, double a) {
  const int n = sp.size();
  const RVec diag = (sp.kinetic().array() + a).inverse();
  CVec out(n);
  if (sp.periodic()) {
    CVec hat(n);
    sp.fft().forward(r.data(), hat.data());
    hat.array() *= diag.array() / static_cast<double>(n);
    sp.fft().backward(hat.data(), out.data());
    return out;
  }
  RVec re = r.real(), im = r.imag(), tmp(n), bre(n), bim(n);
  const double s = 1.0 / sp.sine().round_trip_factor();
  sp.sine().forward(re.data(), tmp.data());
  tmp.array() *= diag.array() * s;
  sp.sine().backward(tmp.data(), bre.data());
  sp.sine().forward(im.data(), tmp.data());
  tmp.array() *= diag.array() * s;
  sp.sine().backward(tmp.data(), bim.data());
  for (int j = 0; j < n; ++j) out(j) = cplx(bre(j), bim(j));
  return out;
}

}  // namespace

CVec GridFunctional::precondition(const CVec& u, const CVec& r, double shift) const {
  const ModelSpace& sp = *p_.space();
  RVec v = p_.h.potential();
  if (p_.g != 0.0) v += p_.g * p_.w.convolve(RVec(u.cwiseAbs2()));
  v.array() -= v.minCoeff();
  const double a = shift;
  const RVec s = (a + v.array()).rsqrt();
  CVec z = kinetic_inverse(sp, CVec(s.cast<cplx>().cwiseProduct(r)), a);
  return a * s.cast<cplx>().cwiseProduct(z);
}

bool GridFunctional::modulus_candidate(const CVec& u, CVec& out) const {
  out = u.cwiseAbs().cast<cplx>();
  return true;
}

CVec GridFunctional::initial_guess() const { return p_.h.ground_mode(); }

CVec GridFunctional::random_guess(Rng& rng) const {
  const ModelSpace& sp = *p_.space();
  const int n = sp.size();
  CVec noise(n);
  for (int j = 0; j < n; ++j) noise(j) = complex_gaussian(rng);
  // Gaussian low-pass keeping a handful of modes per axis.
  const double kc = 2.0 * kPi * smoothing_modes_ / sp.extent();
  const RVec filter = (-sp.kinetic().array() / (2.0 * kc * kc)).exp();
  CVec out(n);
  if (sp.periodic()) {
    CVec hat(n);
    sp.fft().forward(noise.data(), hat.data());
    hat.array() *= filter.array();
    sp.fft().backward(hat.data(), out.data());
  } else {
    RVec re = noise.real(), im = noise.imag(), tmp(n), bre(n), bim(n);
    sp.sine().forward(re.data(), tmp.data());
    tmp.array() *= filter.array();
    sp.sine().backward(tmp.data(), bre.data());
    sp.sine().forward(im.data(), tmp.data());
    tmp.array() *= filter.array();
    sp.sine().backward(tmp.data(), bim.data());
    for (int j = 0; j < n; ++j) out(j) = cplx(bre(j), bim(j));
  }
  sp.normalize(out);
  return out;
}

namespace {

struct RestartOutcome {
  MinimizerResult result;
  int index = 0;
  int hops_accepted = 0;
};

RestartOutcome run_restart(const GPProblem& p, const GPOptions& opts, int index) {
  GridFunctional f(p, opts.smoothing_modes);
  Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(index));
  const CVec start = index == 0 ? f.initial_guess() : f.random_guess(rng);
  MinimizerOptions mo;
  mo.tol_resid = opts.tol_resid;
  mo.max_iter = opts.max_iter;
  mo.method = opts.method;
  mo.energy_window = opts.energy_window;
  mo.record_trace = true;
  RestartOutcome out{minimize_on_sphere(f, start, mo), index, 0};
  int stale = 0;
  for (int h = 0; h < opts.hops && stale < opts.hop_patience; ++h) {
    const CVec trial = out.result.u + opts.hop_amplitude * f.random_guess(rng);
    MinimizerResult r = minimize_on_sphere(f, trial, mo);
    if (r.converged && (!out.result.converged || r.energy < out.result.energy - 1e-10)) {
      out.result = std::move(r);
      ++out.hops_accepted;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return out;
}

}  // namespace

GPSolution solve_gp(const GPProblem& p, const GPOptions& opts) {
  const int R = std::max(1, opts.restarts);
  std::vector<RestartOutcome> runs(R);
  const int threads = std::max(1, opts.threads);
  for (int base = 0; base < R; base += threads) {
    std::vector<std::future<RestartOutcome>> jobs;
    for (int i = base; i < std::min(R, base + threads); ++i)
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                run_restart, std::cref(p), std::cref(opts), i));
    for (auto& j : jobs) {
      RestartOutcome o = j.get();
      runs[o.index] = std::move(o);
    }
  }

  GPSolution sol;
  sol.restarts_used = R;
  int best = -1;
  for (int i = 0; i < R; ++i) {
    const auto& r = runs[i].result;
    sol.restarts.push_back({r.energy, r.residual, r.iterations, runs[i].hops_accepted, r.converged});
    if (!r.converged) continue;
    if (best < 0 || r.energy < runs[best].result.energy) best = i;
  }
  if (best < 0) {
    double rmin = runs[0].result.residual;
    for (const auto& r : runs) rmin = std::min(rmin, r.result.residual);
    throw NonConvergence("GP solver: no restart reached residual " + std::to_string(opts.tol_resid) +
                         " (best " + std::to_string(rmin) + ")");
  }

  const auto& b = runs[best].result;
  sol.u0 = b.u;
  sol.e_gp = b.energy;
  sol.eps0 = b.multiplier;
  sol.residual = b.residual;
  sol.best_restart = best;
  sol.energy_trace = b.energy_trace;
  sol.distinct_densities.push_back(b.u.cwiseAbs2());
  for (int i = 0; i < R; ++i) {
    const auto& r = runs[i].result;
    if (i == best || !r.converged || std::abs(r.energy - b.energy) > 1e-8) continue;
    const RVec rho = r.u.cwiseAbs2();
    bool is_new = true;
    for (const auto& known : sol.distinct_densities)
      if ((rho - known).cwiseAbs().maxCoeff() <= 1e-4) is_new = false;
    if (is_new) sol.distinct_densities.push_back(rho);
  }
  sol.degenerate = sol.distinct_densities.size() > 1;
  return sol;
}

double thermodynamic_coupling(double rho, const ModelSpace& space) { return rho * space.volume(); }

ScalingReport check_scaling_identity(const OneBodyOperator& h, const Interaction& w, double rho,
                                     double lambda, const GPOptions& opts) {
  if (!(lambda > 0.0)) throw ConfigError("scaling factor must be positive");
  const ModelSpace& sp = *h.space();
  GPProblem ref(h, w, thermodynamic_coupling(rho, sp));
  GPProblem sc(h, w.scaled(1.0 / lambda), thermodynamic_coupling(rho * lambda, sp));
  GPOptions o2 = opts;
  o2.seed = splitmix64(opts.seed + 1);
  ScalingReport rep;
  rep.lambda = lambda;
  rep.e_reference = solve_gp(ref, opts).e_gp;
  rep.e_scaled = solve_gp(sc, o2).e_gp;
  rep.mismatch = std::abs(rep.e_scaled - rep.e_reference) / std::max(1.0, std::abs(rep.e_reference));
  return rep;
}

DensityShape analyze_density(const RVec& rho, double rel_threshold) {
  DensityShape s;
  const int n = static_cast<int>(rho.size());
  if (n < 3) return s;
  const double top = rho.maxCoeff();
  std::vector<int> peaks;
  for (int i = 1; i + 1 < n; ++i)
    if (rho(i) > rho(i - 1) && rho(i) >= rho(i + 1) && rho(i) > rel_threshold * top) peaks.push_back(i);
  s.interior_maxima = static_cast<int>(peaks.size());
  if (peaks.size() >= 2) {
    const RVec span = rho.segment(peaks.front(), peaks.back() - peaks.front() + 1);
    s.contrast = (span.maxCoeff() - span.minCoeff()) / span.maxCoeff();
  }
  s.symmetry_broken = s.interior_maxima >= 2;
  return s;
}

}  // namespace mfbose
