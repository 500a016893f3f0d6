#include "mfbose/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mfbose/bogoliubov.hpp"
#include "mfbose/definetti.hpp"
#include "mfbose/dynamics.hpp"
#include "mfbose/theorem_checks.hpp"

namespace mfbose {

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return seconds <= budget_seconds;
}

namespace {

struct Spec {
  const char* name;
  double budget;
};

constexpr Spec kSpecs[kAcceptanceCriteria] = {
    {"closed-form-dispersion", 1.0},   {"two-sided-energy-bound", 60.0},
    {"excitation-spectrum", 600.0},    {"quantitative-definetti", 120.0},
    {"fig3-symmetry-breaking", 60.0},  {"inequality-suites", 120.0},
    {"dynamics", 600.0},               {"scaling-identity", 60.0},
    {"second-order-correction", 60.0},
};

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}
Check at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}
Check holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, ok}; }

SpacePtr torus(int grid) { return build_model({1, 2.0 * kPi, grid, Boundary::Periodic}); }

Interaction cosine(const SpacePtr& sp) {
  InteractionSpec s;
  s.kind = "cosine";
  s.coefficients = {1.0, 1.0};
  return make_interaction(s, sp);
}

/// Band-limited w = sum_n 2^{-n} cos(n x), n = 0..8: positive definite on the torus.
Interaction cosine_series(const SpacePtr& sp) {
  InteractionSpec s;
  s.kind = "cosine";
  s.coefficients.clear();
  for (int n = 0; n <= 8; ++n) s.coefficients.push_back(std::ldexp(1.0, -n));
  return make_interaction(s, sp);
}

// 1. Numeric BdG spectrum of the constant condensate on the torus against the
// closed-form dispersion at every lattice momentum.
std::vector<Check> dispersion(const AcceptanceOptions&) {
  const int N = 10, grid = 32;
  const SpacePtr sp = torus(grid);
  const Interaction w = cosine_series(sp);
  const double L = sp->extent(), rho = 1.0 / L;
  const GPProblem p(OneBodyOperator(sp), w, N - 1.0);
  const CVec u0 = CVec::Constant(grid, 1.0 / std::sqrt(L));
  const double eps0 = sp->inner(u0, GridFunctional(p).mean_field_apply(u0)).real();
  const BogoliubovSpectrum s = diagonalize(build_hessian(u0, p, eps0));

  const RVec scaled = w.scaled_transform_on_space();
  std::vector<double> closed;
  for (int j = 1; j < grid; ++j) {
    const double k = sp->momentum(j)[0];
    closed.push_back(homogeneous_dispersion(k, scaled(j) / std::sqrt(2.0 * kPi), N, 1, rho));
  }
  std::sort(closed.begin(), closed.end());
  double err = 0.0;
  for (int j = 0; j < grid - 1; ++j) err = std::max(err, std::abs(s.excitations(j) - closed[j]));
  return {at_most("max |e_j - e(k_j)|", err, 1e-10), holds("positive-definite w", w.positive_definite())};
}

ModeModel cosine_modes(int M) {
  const SpacePtr sp = torus(32);
  return ModeModel::plane_waves(OneBodyOperator(sp), cosine(sp), M);
}

// 2. e_GP - (w1(0)+w2(0))/(N-3) <= E(N)/N <= e_GP for N = 4..12, gap shrinking.
std::vector<Check> energy_bound(const AcceptanceOptions& o) {
  const ModeModel m = cosine_modes(5);
  const ModeGPSolution gp = solve_mode_gp(m, 1.0, 8, o.seed);
  double worst = -INFINITY;
  bool shrinking = true;
  double prev_gap = INFINITY;
  for (int N = 4; N <= 12; ++N) {
    const double E = many_body_spectrum(m, N, 1).front();
    const EnergyBoundsReport r = energy_bounds_check(E, N, gp.e_gp, m.w_abs_sum);
    worst = std::max({worst, r.lower - r.energy_per_particle, r.energy_per_particle - r.upper});
    if (!(r.gap < prev_gap)) shrinking = false;
    prev_gap = r.gap;
  }
  return {at_most("max bound violation", worst, 1e-10), holds("gap strictly shrinking", shrinking)};
}

// 3. delta_j(N) decreasing, delta_j(18) <= 5% e_1, overlap >= 0.99 at N = 18.
std::vector<Check> excitation_spectrum(const AcceptanceOptions& o) {
  const ModeModel m = cosine_modes(5);
  const SpectrumConvergenceReport r = excitation_spectrum_convergence(m, {6, 10, 14, 18}, 5, 12, o.seed);
  double last = 0.0;
  for (double d : r.ladder.back().deltas) last = std::max(last, d);
  return {holds("delta_j(N) strictly decreasing", r.deltas_decreasing),
          at_most("max_j delta_j(18)", last, 0.05 * r.gap),
          holds("overlap increasing", r.overlap_increasing),
          at_least("overlap at N = 18", r.ladder.back().overlap, 0.99)};
}

// 4. Trace-norm de Finetti error of 20 random states against 2kd/(N-kd).
std::vector<Check> definetti(const AcceptanceOptions& o) {
  const int dim = 2, N = 10, k = 1;
  MCOptions mc;
  mc.samples = 100000;
  mc.seed = o.seed;
  const ResolutionReport res = coherent_resolution_check(dim, N, mc);
  Rng rng = make_stream(o.seed, 0x5eed);
  double worst = -INFINITY, bound = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int rank = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(N + 1));
    const SymmetricState g = random_symmetric_state(dim, N, rank, rng);
    mc.seed = splitmix64(o.seed + 1 + s);
    const DeFinettiReport r = definetti_error(g, k, husimi_measure(g, mc));
    bound = r.bound;
    worst = std::max(worst, r.error - (r.bound + 3.0 * r.sigma));
  }
  return {at_most("bound", bound, 0.5 + 1e-15), at_most("max (error - bound - 3 sigma)", worst, 0.0),
          at_most("resolution error / (3 sigma)", res.error / (3.0 * res.sigma), 1.0)};
}

// 5. Truncated Lennard-Jones, Dirichlet box, N = 10, rho = 1.
std::vector<Check> fig3(const AcceptanceOptions& o) {
  const SpacePtr sp = build_model({1, 10.0, 512, Boundary::Dirichlet});
  InteractionSpec lj;
  lj.kind = "lennard-jones";
  const GPProblem p(OneBodyOperator(sp), make_interaction(lj, sp), 9.0);
  GPOptions go;
  go.seed = o.seed;
  go.threads = o.threads;
  go.hops = 150;
  go.hop_patience = 60;
  const GPSolution s = solve_gp(p, go);
  const DensityShape shape = analyze_density(s.u0.cwiseAbs2());
  double spread = 0.0;
  bool all = true;
  for (const auto& r : s.restarts) {
    all = all && r.converged;
    spread = std::max(spread, std::abs(r.energy - s.e_gp));
  }
  return {at_least("interior maxima", shape.interior_maxima, 2), at_least("contrast", shape.contrast, 0.5),
          holds("all restarts converged", all), at_most("restart energy spread", spread, 1e-6)};
}

// 6. Hoffmann-Ostenhof, interaction lower bound and density-matrix hierarchy.
std::vector<Check> inequalities(const AcceptanceOptions& o) {
  Rng rng = make_stream(o.seed, 6);
  auto random_state = [&](const FockBasis& b) {
    CVec v(b.size());
    for (int i = 0; i < v.size(); ++i) v(i) = complex_gaussian(rng);
    return CVec(v / v.norm());
  };

  const SpacePtr sp = build_model({1, 4.0, 6, Boundary::Dirichlet});
  const OneBodyOperator h(sp);
  const CMat hfd = h.finite_difference_matrix().cast<cplx>();
  const FockBasis b3 = FockBasis::fixed(sp->size(), 3);
  double ho = INFINITY;
  for (int s = 0; s < 1000; ++s) {
    // Every tenth state is a product of a nonnegative orbital, where equality holds.
    CVec psi;
    if (s % 10 == 0) {
      const CVec orb = random_state(FockBasis::fixed(sp->size(), 1)).cwiseAbs().cast<cplx>();
      psi = product_state(b3, orb / orb.norm());
    } else {
      psi = random_state(b3);
    }
    ho = std::min(ho, hoffmann_ostenhof_slack(reduced_density_matrix(b3, psi, 1), hfd, 3));
  }

  const SpacePtr tp = torus(24);
  const Interaction w = cosine_series(tp);
  std::uniform_int_distribution<int> cell(0, tp->size() - 1);
  std::uniform_int_distribution<int> count(2, 8);
  double lb = INFINITY;
  for (int s = 0; s < 10000; ++s) {
    const int n = count(rng);
    std::vector<Point> x;
    for (int j = 0; j < n; ++j) x.push_back(tp->position(cell(rng)));
    RVec eta(tp->size());
    if (s % 2 == 0) {
      std::vector<int> cells;
      for (int j = 0; j < n; ++j) cells.push_back(cell(rng));
      eta = point_masses(*tp, cells);
    } else {
      std::uniform_real_distribution<double> U(0.0, 1.0);
      for (int i = 0; i < eta.size(); ++i) eta(i) = U(rng);
      eta *= n / (eta.sum() * tp->cell_volume());
    }
    lb = std::min(lb, interaction_lower_bound_slack(w, eta, x));
  }

  const FockBasis b4 = FockBasis::fixed(3, 6);
  double trace_err = 0.0, min_eig = INFINITY, consistency = 0.0;
  for (int s = 0; s < 100; ++s) {
    const CVec psi = random_state(b4);
    ReducedDensityMatrix prev = reduced_density_matrix(b4, psi, 3);
    for (int k = 3; k >= 1; --k) {
      trace_err = std::max(trace_err, std::abs(prev.trace() - 1.0));
      min_eig = std::min(min_eig, prev.min_eigenvalue());
      if (k == 1) break;
      const ReducedDensityMatrix direct = reduced_density_matrix(b4, psi, k - 1);
      consistency = std::max(consistency, (partial_trace(prev).matrix - direct.matrix).cwiseAbs().maxCoeff());
      prev = direct;
    }
  }
  return {at_least("min Hoffmann-Ostenhof slack", ho, -1e-10),
          at_least("min interaction lower-bound slack", lb, -1e-10),
          holds("w positive definite", w.positive_definite()),
          at_most("max |Tr Gamma^(k) - 1|", trace_err, 1e-10),
          at_least("min eigenvalue of Gamma^(k)", min_eig, -1e-10),
          at_most("max |Tr Gamma^(k) - Gamma^(k-1)|", consistency, 1e-10)};
}

// 7. GP flow, Bogoliubov flow and the comparison with exact dynamics.
std::vector<Check> dynamics(const AcceptanceOptions&) {
  const SpacePtr sp = torus(32);
  const OneBodyOperator h(sp);
  InteractionSpec zs;
  zs.kind = "zero";
  const GPProblem free(h, make_interaction(zs, sp), 1.0);
  CVec pw(sp->size());
  for (int j = 0; j < sp->size(); ++j) pw(j) = std::polar(1.0 / std::sqrt(2.0 * kPi), sp->position(j)[0]);
  const GPTrajectory ft = evolve_gp(pw, free, 1.0, 0.01);
  double free_err = 0.0;
  for (int j = 0; j < sp->size(); ++j)
    free_err = std::max(free_err, std::abs(ft.u.back()(j) - std::polar(1.0 / std::sqrt(2.0 * kPi),
                                                                         sp->position(j)[0] - 1.0)));

  const GPProblem p(h, cosine(sp), 1.0);
  CVec v(sp->size());
  for (int j = 0; j < sp->size(); ++j) {
    const double x = sp->position(j)[0];
    v(j) = cplx(1.0 + 0.5 * std::cos(x), 0.3 * std::sin(2.0 * x));
  }
  sp->normalize(v);
  const GPTrajectory tr = evolve_gp(v, p, 5.0, 0.01, 10);

  const ModeModel m = ModeModel::plane_waves(h, cosine(sp), 3);
  CVec c(3);
  c << 1.0, 0.5, cplx(0.0, 0.3);
  c.normalize();
  const ComparisonReport rep =
      compare_exact(m, {4, 8, 12}, c, fluctuation_vacuum(3, 12), 12, 0.5, 0.01, {0.0, 0.25, 0.5});
  return {at_most("free plane wave error", free_err, 1e-8),
          at_most("GP norm drift", tr.max_norm_drift(), 1e-8),
          at_most("GP energy drift", tr.max_energy_drift(), 1e-6),
          at_most("u(t)-mode occupancy of Phi(t)", rep.bogoliubov.max_u_occupancy(), 1e-6),
          at_most("Phi norm drift", rep.bogoliubov.max_norm_drift(), 1e-6),
          holds("D(N, 0.5) decreasing over N = 4, 8, 12",
                rep.distance(4, 0.5) > rep.distance(8, 0.5) && rep.distance(8, 0.5) > rep.distance(12, 0.5))};
}

// 8. e_GP(rho lambda, w / lambda) = e_GP(rho, w).
std::vector<Check> scaling(const AcceptanceOptions& o) {
  GPOptions go;
  go.seed = o.seed;
  go.threads = o.threads;
  go.tol_resid = 1e-10;
  const SpacePtr tp = torus(64);
  const ScalingReport pd = check_scaling_identity(OneBodyOperator(tp), cosine_series(tp), 1.0, 3.0, go);

  const SpacePtr bp = build_model({1, 10.0, 256, Boundary::Dirichlet});
  InteractionSpec lj;
  lj.kind = "lennard-jones";
  go.hops = 60;
  go.hop_patience = 25;
  go.tol_resid = 1e-9;
  const ScalingReport ljr = check_scaling_identity(OneBodyOperator(bp), make_interaction(lj, bp), 1.0, 3.0, go);
  return {at_most("mismatch, positive-definite w", pd.mismatch, 1e-8),
          at_most("mismatch, truncated Lennard-Jones", ljr.mismatch, 1e-6)};
}

// 9. Continuum second-order term against the extrapolated torus sums.
std::vector<Check> second_order(const AcceptanceOptions&) {
  const SecondOrderReport r =
      second_order_correction(gaussian_transform(1.0, 1.0, 1), 1, {2.0 * kPi, 4.0 * kPi, 8.0 * kPi}, 40.0);
  return {at_most("relative mismatch", r.relative_mismatch, 1e-3)};
}

using Runner = std::function<std::vector<Check>(const AcceptanceOptions&)>;

const Runner kRunners[kAcceptanceCriteria] = {dispersion, energy_bound, excitation_spectrum,
                                              definetti, fig3, inequalities,
                                              dynamics, scaling, second_order};

}  // namespace

std::string criterion_name(int id) {
  if (id < 1 || id > kAcceptanceCriteria) throw ConfigError("unknown acceptance criterion " + std::to_string(id));
  return kSpecs[id - 1].name;
}

double criterion_budget(int id) {
  criterion_name(id);
  return kSpecs[id - 1].budget;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  CriterionResult r;
  r.id = id;
  r.name = criterion_name(id);
  r.budget_seconds = criterion_budget(id);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.checks = kRunners[id - 1](opts);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string format_result(const CriterionResult& r, bool verbose) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %d %s (%.2f s, budget %.0f s)", r.pass() ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds);
  std::string out = head;
  if (!r.error.empty()) return out + " error: " + r.error;
  if (!verbose) {
    int failed = 0;
    for (const auto& c : r.checks) failed += !c.pass;
    return failed ? out + " " + std::to_string(failed) + " check(s) failed" : out;
  }
  for (const auto& c : r.checks) {
    char line[200];
    std::snprintf(line, sizeof line, "\n    %-4s %s = %.6g (limit %.6g)", c.pass ? "ok" : "FAIL", c.name.c_str(),
                  c.value, c.threshold);
    out += line;
  }
  return out;
}

}  // namespace mfbose
