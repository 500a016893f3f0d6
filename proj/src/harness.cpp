#include "mfbose/harness.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <map>

#include "mfbose/acceptance.hpp"
#include "mfbose/definetti.hpp"
#include "mfbose/dynamics.hpp"
#include "mfbose/theorem_checks.hpp"

#ifndef MFBOSE_VERSION
#define MFBOSE_VERSION "dev"
#endif

namespace mfbose {

bool RunManifest::all_pass() const {
  if (!error.empty() || static_cast<int>(assertions.size()) != declared_assertions) return false;
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

int RunManifest::exit_code() const {
  if (!error.empty()) return 2;
  return all_pass() ? 0 : 1;
}

Json RunManifest::to_json() const {
  Json j;
  j["kind"] = kind;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["seed"] = seed;
  j["declared_assertions"] = declared_assertions;
  j["exit_code"] = exit_code();
  j["error"] = error;
  j["artifacts"] = artifacts;
  Json t = Json::array();
  for (const auto& o : timings) t.push_back({{"op", o.op}, {"seconds", o.seconds}});
  j["timings"] = t;
  Json a = Json::array();
  for (const auto& x : assertions)
    a.push_back({{"name", x.name},
                 {"value", std::isfinite(x.value) ? Json(x.value) : Json(nullptr)},
                 {"threshold", x.threshold},
                 {"pass", x.pass},
                 {"applicable", x.applicable}});
  j["assertions"] = a;
  return j;
}

namespace {

Assertion at_most(std::string n, double v, double t) { return {std::move(n), v, t, v <= t, true}; }
Assertion at_least(std::string n, double v, double t) { return {std::move(n), v, t, v >= t, true}; }
Assertion holds(std::string n, bool ok) { return {std::move(n), ok ? 1.0 : 0.0, 1.0, ok, true}; }
Assertion not_applicable(std::string n) { return {std::move(n), NAN, 0.0, true, false}; }

struct Context {
  const ExperimentConfig& cfg;
  std::filesystem::path out;
  RunManifest& man;

  template <class F>
  auto timed(const std::string& op, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      man.timings.push_back({op, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  }

  void csv(const std::string& name, CsvTable t) {
    t.meta("seed", std::to_string(cfg.seed));
    t.meta("config_hash", man.config_hash);
    t.write(out / name);
    man.artifacts.push_back(name);
  }

  void json(const std::string& name, Json j) {
    j["seed"] = cfg.seed;
    j["config_hash"] = man.config_hash;
    write_json(out / name, std::move(j));
    man.artifacts.push_back(name);
  }
};

struct Model {
  SpacePtr space;
  OneBodyOperator h;
  Interaction w;
  double g;
};

Model build(const ExperimentConfig& c) {
  SpacePtr sp = build_model(c.space);
  OneBodyOperator h(sp, make_potential(c.potential, *sp));
  Interaction w = make_interaction(c.interaction, sp);
  if (c.interaction_scale != 1.0) w = w.scaled(c.interaction_scale);
  const double g = c.gp.coupling.value_or(c.gp.particles - 1.0);
  return {sp, std::move(h), std::move(w), g};
}

GPOptions gp_options(const ExperimentConfig& c) {
  GPOptions o;
  o.restarts = c.gp.restarts;
  o.tol_resid = c.gp.tol_resid;
  o.max_iter = c.gp.max_iter;
  o.seed = c.seed;
  o.threads = c.threads;
  o.hops = c.gp.hops;
  o.hop_patience = c.gp.hop_patience;
  o.hop_amplitude = c.gp.hop_amplitude;
  o.method = c.gp.method == "cg" ? DescentMethod::ConjugateGradient : DescentMethod::Gradient;
  return o;
}

ModeModel mode_model(const ExperimentConfig& c, const Model& m, int M) {
  return c.ed.basis == "plane-waves" ? ModeModel::plane_waves(m.h, m.w, M) : ModeModel::eigenmodes(m.h, m.w, M);
}

CsvTable solution_table(const ModelSpace& sp, const CVec& u) {
  const bool two = sp.dimension() == 2;
  CsvTable t(two ? std::vector<std::string>{"x", "y", "re_u", "im_u", "density"}
                 : std::vector<std::string>{"x", "re_u", "im_u", "density"});
  for (int j = 0; j < sp.size(); ++j) {
    const Point x = sp.position(j);
    if (two) t.row({x[0], x[1], u(j).real(), u(j).imag(), std::norm(u(j))});
    else t.row({x[0], u(j).real(), u(j).imag(), std::norm(u(j))});
  }
  return t;
}

Json gp_summary(const GPSolution& s, double g) {
  Json j;
  j["e_gp"] = s.e_gp;
  j["eps0"] = s.eps0;
  j["residual"] = s.residual;
  j["coupling"] = g;
  j["degenerate"] = s.degenerate;
  j["distinct_minimizers"] = s.distinct_densities.size();
  j["best_restart"] = s.best_restart;
  Json r = Json::array();
  for (const auto& x : s.restarts)
    r.push_back({{"energy", x.energy}, {"residual", x.residual}, {"iterations", x.iterations},
                 {"hops_accepted", x.hops_accepted}, {"converged", x.converged}});
  j["restarts"] = r;
  return j;
}

void run_gp(Context& ctx, bool fig3) {
  const Model m = build(ctx.cfg);
  const GPProblem p(m.h, m.w, m.g);
  const GPSolution s = ctx.timed("solve_gp", [&] { return solve_gp(p, gp_options(ctx.cfg)); });
  ctx.csv("solution.csv", solution_table(*m.space, s.u0));
  Json j = gp_summary(s, m.g);
  double spread = 0.0;
  bool converged = true;
  for (const auto& r : s.restarts) {
    converged = converged && r.converged;
    if (r.converged) spread = std::max(spread, std::abs(r.energy - s.e_gp));
  }
  j["restart_energy_spread"] = spread;
  auto& a = ctx.man.assertions;
  if (fig3) {
    if (m.space->dimension() != 1) throw ConfigError("key 'space.dimension': fig3 runs are one-dimensional");
    const DensityShape shape = analyze_density(s.u0.cwiseAbs2());
    j["symmetry_broken"] = shape.symmetry_broken;
    j["interior_maxima"] = shape.interior_maxima;
    j["contrast"] = shape.contrast;
    a.push_back(holds("symmetry broken (>= 2 interior maxima)", shape.symmetry_broken));
    a.push_back(at_least("contrast", shape.contrast, 0.5));
    a.push_back(at_most("restart energy spread", converged ? spread : INFINITY, 1e-6));
  } else {
    a.push_back(at_most("GP residual", s.residual, ctx.cfg.gp.tol_resid));
    a.push_back(at_most("|norm - 1|", std::abs(m.space->norm(s.u0) - 1.0), 1e-10));
  }
  ctx.json("summary.json", j);
}

void run_bdg(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const Model m = build(c);
  const GPProblem p(m.h, m.w, m.g);
  const GPSolution s = ctx.timed("solve_gp", [&] { return solve_gp(p, gp_options(c)); });
  const QuadraticHamiltonian q = ctx.timed("build_hessian", [&] { return build_hessian(s.u0, p, s.eps0); });
  const double eta = check_nondegeneracy(q);
  auto& a = ctx.man.assertions;
  a.push_back(at_least("eta_min", eta, 1e-12));

  Json spec;
  spec["e_gp"] = s.e_gp;
  spec["eps0"] = s.eps0;
  spec["eta_min"] = eta;
  RVec exc;
  if (eta > 0.0) {
    const BogoliubovSpectrum bs = ctx.timed("diagonalize", [&] { return diagonalize(q); });
    exc = bs.excitations;
    const int J = std::min<int>(c.bdg.levels, exc.size());
    spec["excitations"] = std::vector<double>(exc.data(), exc.data() + J);
    spec["e_bog"] = bs.ground_energy;
    spec["ladder"] = excitation_ladder(bs, c.bdg.levels);
  }
  ctx.json("spectrum.json", spec);

  const ModelSpace& sp = *m.space;
  const bool homogeneous =
      sp.periodic() && !m.h.has_potential() && eta > 0.0 &&
      (s.u0.cwiseAbs2().array() - 1.0 / sp.volume()).abs().maxCoeff() < 1e-8;
  if (sp.periodic() && sp.dimension() == 1) {
    // Closed form at the lattice momenta with rho = 1/L and N - 1 = g.
    const RVec scaled = m.w.scaled_transform_on_space();
    const int N = static_cast<int>(std::lround(m.g)) + 1;
    CsvTable t({"k", "e_closed_form", "classification"});
    std::vector<double> ks, es;
    std::string shape = "unstable";
    try {
      for (int j = 0; j < sp.size(); ++j) {
        const double k = sp.momentum(j)[0];
        if (k < 0.0) continue;
        ks.push_back(k);
        es.push_back(homogeneous_dispersion(k, scaled(j) / std::sqrt(2.0 * kPi), N, 1, 1.0 / sp.volume()));
      }
      shape = to_string(classify_dispersion(ks, es));
    } catch (const InstabilityAt& e) {
      spec["instability_momentum"] = e.momentum;
      es.resize(ks.size(), NAN);
    }
    for (std::size_t i = 0; i < ks.size(); ++i) t.row({format_number(ks[i]), format_number(es[i]), shape});
    ctx.csv("dispersion.csv", t);
  }
  if (homogeneous && std::abs(m.g - std::lround(m.g)) < 1e-12) {
    const RVec scaled = m.w.scaled_transform_on_space();
    std::vector<double> closed;
    for (int j = 1; j < sp.size(); ++j) {
      const Point k = sp.momentum(j);
      const double kk = std::hypot(k[0], k[1]);
      closed.push_back(homogeneous_dispersion(kk, scaled(j) / std::pow(2.0 * kPi, 0.5 * sp.dimension()),
                                              static_cast<int>(std::lround(m.g)) + 1, sp.dimension(),
                                              1.0 / sp.volume()));
    }
    std::sort(closed.begin(), closed.end());
    double err = 0.0;
    for (std::size_t j = 0; j < closed.size(); ++j) err = std::max(err, std::abs(exc(j) - closed[j]));
    a.push_back(at_most("closed-form dispersion mismatch", err, 1e-10 * std::max(1.0, closed.back())));
  } else {
    a.push_back(not_applicable("closed-form dispersion mismatch"));
  }

  if (!c.bdg.extents.empty()) {
    const SecondOrderReport r = ctx.timed("second_order_correction", [&] {
      return second_order_correction(gaussian_transform(1.0, c.bdg.width, sp.dimension()), sp.dimension(),
                                     c.bdg.extents, c.bdg.k_max);
    });
    Json j;
    j["continuum"] = r.continuum;
    j["extents"] = r.extents;
    j["torus_sums"] = r.torus_sums;
    j["extrapolated"] = r.extrapolated;
    j["relative_mismatch"] = r.relative_mismatch;
    ctx.json("second_order.json", j);
    a.push_back(at_most("second-order relative mismatch", r.relative_mismatch, 1e-3));
  }
}

void run_ed(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const Model m = build(c);
  const ModeModel mm = mode_model(c, m, c.ed.modes);
  const SpectrumConvergenceReport r = ctx.timed("excitation_spectrum_convergence", [&] {
    return excitation_spectrum_convergence(mm, c.ed.particles, c.ed.levels, c.ed.n_max, c.seed);
  });
  const ModeGPSolution gp = solve_mode_gp(mm, 1.0, 8, c.seed);

  CsvTable eigs({"N", "j", "lambda", "lambda_minus_N_e_gp", "lambda_H0", "delta"});
  bool bounds = true;
  double worst = -INFINITY;
  Json rdm = Json::array();
  CsvTable dec({"N", "n", "weight"});
  for (const LadderPoint& p : r.ladder) {
    for (std::size_t j = 0; j < p.levels.size(); ++j)
      eigs.row({double(p.N), double(j), p.levels[j] + p.N * p.e_gp, p.levels[j], p.reference[j], p.deltas[j]});
    if (p.N >= 4) {
      const EnergyBoundsReport b = energy_bounds_check(p.levels[0] + p.N * p.e_gp, p.N, p.e_gp, mm.w_abs_sum);
      bounds = bounds && b.holds;
      worst = std::max({worst, b.lower - b.energy_per_particle, b.energy_per_particle - b.upper});
    }
    const GroundState gs = ctx.timed("ground_state N=" + std::to_string(p.N),
                                     [&] { return many_body_ground_state(mm, p.N); });
    const ReducedDensityMatrix g1 = reduced_density_matrix(gs.basis, gs.psi, 1);
    const RVec occ = g1.occupations();
    rdm.push_back({{"N", p.N},
                   {"occupations", std::vector<double>(occ.data(), occ.data() + occ.size())},
                   {"condensate_fraction", condensate_fraction(g1)}});
    const ExcitationVector x = excitation_decompose(gs.basis, gs.psi, gp.c);
    const auto w = x.weights();
    for (std::size_t n = 0; n < w.size(); ++n) dec.row({double(p.N), double(n), w[n]});
  }
  ctx.csv("eigs.csv", eigs);
  Json rj;
  rj["gamma1"] = rdm;
  rj["e_gp"] = gp.e_gp;
  rj["bogoliubov_gap"] = r.gap;
  rj["eta_min"] = r.eta_min;
  ctx.json("rdm.json", rj);
  ctx.csv("decomposition.csv", dec);

  auto& a = ctx.man.assertions;
  if (worst == -INFINITY) a.push_back(not_applicable("energy bound violation (N >= 4)"));
  else a.push_back(at_most("energy bound violation (N >= 4)", worst, 1e-10));
  a.push_back(holds("delta_j(N) strictly decreasing", r.deltas_decreasing));
  a.push_back(holds("ground-state overlap increasing", r.overlap_increasing));
}

void run_definetti(Context& ctx) {
  const DefinettiSection& d = ctx.cfg.definetti;
  MCOptions mc;
  mc.samples = d.samples;
  mc.seed = ctx.cfg.seed;
  const ResolutionReport res =
      ctx.timed("coherent_resolution_check", [&] { return coherent_resolution_check(d.dim, d.particles, mc); });
  Rng rng = make_stream(ctx.cfg.seed, 0x5eed);
  const int count = d.state == "random" ? d.states : 1;
  Json states = Json::array();
  double worst = -INFINITY;
  bool applicable = true;
  for (int s = 0; s < count; ++s) {
    SymmetricState g;
    if (d.state == "random") {
      const int rank = d.rank > 0 ? d.rank : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d.particles + 1));
      g = random_symmetric_state(d.dim, d.particles, rank, rng);
    } else if (d.state == "product") {
      g = pure_product_state(uniform_sphere_point(d.dim, rng), d.particles);
    } else if (d.state == "maximally-mixed") {
      g = maximally_mixed_state(d.dim, d.particles);
    } else {
      g = load_symmetric_state(d.state, d.dim, d.particles);
    }
    mc.seed = splitmix64(ctx.cfg.seed + 1 + s);
    const HusimiMeasure mu = husimi_measure(g, mc);
    const DeFinettiReport r = ctx.timed("definetti_error", [&] { return definetti_error(g, d.k, mu); });
    applicable = r.bound_applicable;
    if (r.bound_applicable) worst = std::max(worst, r.error - (r.bound + 3.0 * r.sigma));
    states.push_back({{"error", r.error},
                      {"error_eigen", r.error_eigen},
                      {"sigma", r.sigma},
                      {"bound", std::isfinite(r.bound) ? Json(r.bound) : Json(nullptr)},
                      {"bound_applicable", r.bound_applicable},
                      {"pass", r.within_bound},
                      {"husimi_mass", mu.mass},
                      {"seed", mu.seed}});
  }
  Json j;
  j["dim"] = d.dim;
  j["N"] = d.particles;
  j["k"] = d.k;
  j["samples"] = d.samples;
  j["states"] = states;
  j["resolution_error"] = res.error;
  j["resolution_sigma"] = res.sigma;
  ctx.json("report.json", j);
  auto& a = ctx.man.assertions;
  if (applicable) a.push_back(at_most("max (error - bound - 3 sigma)", worst, 0.0));
  else a.push_back(not_applicable("max (error - bound - 3 sigma)"));
  a.push_back(at_most("resolution error / (3 sigma)", res.error / (3.0 * res.sigma), 1.0));
}

void run_dynamics(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const DynamicsSection& d = c.dynamics;
  const Model m = build(c);
  if (!m.space->periodic()) throw ConfigError("key 'space.boundary': dynamics needs a periodic space");
  const ModeModel mm = ModeModel::plane_waves(m.h, m.w, d.modes);
  CVec c0(d.modes);
  for (int i = 0; i < d.modes; ++i) c0(i) = cplx(d.initial_re[i], d.initial_im[i]);
  if (c0.norm() == 0.0) throw ConfigError("key 'dynamics.initial_re': initial condensate is zero");
  c0.normalize();

  // Grid GP flow from the same condensate.
  CVec u0 = mm.modes * c0;
  m.space->normalize(u0);
  const GPProblem p(m.h, m.w, 1.0);
  const GPTrajectory grid = ctx.timed("evolve_gp", [&] { return evolve_gp(u0, p, d.grid_T, d.dt, 10); });
  CsvTable gt({"t", "norm_drift", "energy_drift"});
  for (std::size_t i = 0; i < grid.t.size(); ++i)
    gt.row({grid.t[i], grid.norm[i] - grid.norm[0],
            (grid.energy[i] - grid.energy[0]) / std::max(1e-300, std::abs(grid.energy[0]))});
  ctx.csv("gp_traj.csv", gt);

  const ComparisonReport rep = ctx.timed("compare_exact", [&] {
    return compare_exact(mm, d.particles, c0, fluctuation_vacuum(d.modes, d.n_max), d.n_max, d.T, d.dt, d.times);
  });
  std::vector<std::string> cols{"t", "norm_drift", "energy_drift", "orthogonality", "phi_norm"};
  for (int n = 0; n <= d.n_max; ++n) cols.push_back("sector_" + std::to_string(n));
  CsvTable tr(cols);
  const auto& bt = rep.bogoliubov;
  for (std::size_t i = 0; i < bt.t.size(); ++i) {
    const std::size_t k = 2 * i;
    std::vector<double> row{bt.t[i], rep.gp.norm[k] - rep.gp.norm[0],
                            (rep.gp.energy[k] - rep.gp.energy[0]) / std::max(1e-300, std::abs(rep.gp.energy[0])),
                            bt.u_occupancy[i], bt.norm[i]};
    row.insert(row.end(), bt.sector_norms[i].begin(), bt.sector_norms[i].end());
    tr.row(row);
  }
  ctx.csv("traj.csv", tr);
  CsvTable cmp({"N", "t", "D"});
  for (const auto& q : rep.points) cmp.row({double(q.N), q.t, q.distance});
  ctx.csv("compare.csv", cmp);

  auto& a = ctx.man.assertions;
  a.push_back(at_most("grid GP norm drift", grid.max_norm_drift(), 1e-8));
  a.push_back(at_most("grid GP energy drift", grid.max_energy_drift(), 1e-6));
  a.push_back(at_most("u(t)-mode occupancy of Phi(t)", bt.max_u_occupancy(), 1e-6));
  a.push_back(at_most("Phi norm drift", bt.max_norm_drift(), 1e-6));
  a.push_back(holds("D(N, t) decreasing in N", rep.decreasing));
}

void run_acceptance(Context& ctx) {
  AcceptanceOptions o;
  o.seed = ctx.cfg.seed;
  o.threads = ctx.cfg.threads;
  Json list = Json::array();
  for (int id : ctx.cfg.acceptance.criteria) {
    const CriterionResult r = run_criterion(id, o);
    ctx.man.timings.push_back({"criterion " + std::to_string(id), r.seconds});
    Json checks = Json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    list.push_back({{"id", id}, {"name", r.name}, {"pass", r.pass()}, {"error", r.error},
                    {"budget_seconds", r.budget_seconds}, {"checks", checks}});
    ctx.man.assertions.push_back(holds(std::to_string(id) + " " + r.name, r.pass()));
  }
  Json j;
  j["criteria"] = list;
  ctx.json("acceptance.json", j);
}

}  // namespace

int declared_assertions(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::GPSolve: return 2;
    case ExperimentKind::Fig3: return 3;
    case ExperimentKind::BdgSpectrum: return c.bdg.extents.empty() ? 2 : 3;
    case ExperimentKind::EdSpectrum: return 3;
    case ExperimentKind::DefinettiCheck: return 2;
    case ExperimentKind::Dynamics: return 5;
    case ExperimentKind::Acceptance: return static_cast<int>(c.acceptance.criteria.size());
  }
  return 0;
}

RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  RunManifest man;
  man.kind = to_string(cfg.kind);
  man.config_hash = cfg.hash();
  man.version = MFBOSE_VERSION;
  man.seed = cfg.seed;
  man.output = out;
  man.declared_assertions = declared_assertions(cfg);
  Context ctx{cfg, out, man};
  try {
    std::filesystem::create_directories(out);
    switch (cfg.kind) {
      case ExperimentKind::GPSolve: run_gp(ctx, false); break;
      case ExperimentKind::Fig3: run_gp(ctx, true); break;
      case ExperimentKind::BdgSpectrum: run_bdg(ctx); break;
      case ExperimentKind::EdSpectrum: run_ed(ctx); break;
      case ExperimentKind::DefinettiCheck: run_definetti(ctx); break;
      case ExperimentKind::Dynamics: run_dynamics(ctx); break;
      case ExperimentKind::Acceptance: run_acceptance(ctx); break;
    }
  } catch (const std::exception& e) {
    man.error = man.kind + ": " + e.what();
  }
  try {
    write_json(out / "manifest.json", man.to_json());
  } catch (const std::exception& e) {
    if (man.error.empty()) man.error = e.what();
  }
  return man;
}

int SweepReport::exit_code() const {
  int code = 0;
  for (const auto& r : runs) code = std::max(code, r.exit_code());
  return code;
}

SweepReport sweep(const ExperimentConfig& cfg, const std::string& axis, const std::vector<double>& values,
                  const std::filesystem::path& out) {
  SweepReport rep;
  rep.axis = axis;
  rep.values = values;
  rep.runs.resize(values.size());
  auto job = [&](std::size_t i) {
    ExperimentConfig c = cfg;
    c.sweep.reset();
    c.threads = 1;
    const std::filesystem::path dir = out / (axis + "-" + format_number(values[i]));
    try {
      apply_axis(c, axis, values[i]);
    } catch (const std::exception& e) {
      RunManifest m;
      m.kind = to_string(cfg.kind);
      m.output = dir;
      m.error = e.what();
      return m;
    }
    return run_experiment(c, dir);
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, cfg.threads));
  for (std::size_t base = 0; base < values.size(); base += width) {
    std::vector<std::future<RunManifest>> jobs;
    for (std::size_t i = base; i < std::min(values.size(), base + width); ++i)
      jobs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, job, i));
    for (std::size_t i = 0; i < jobs.size(); ++i) rep.runs[base + i] = jobs[i].get();
  }

  std::filesystem::create_directories(out);
  CsvTable t({axis, "status", "passed", "declared", "config_hash"});
  Json runs = Json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RunManifest& m = rep.runs[i];
    int passed = 0;
    for (const auto& a : m.assertions) passed += a.pass;
    const std::string status = m.exit_code() == 0 ? "pass" : m.exit_code() == 1 ? "fail" : "error";
    t.row({format_number(values[i]), status, std::to_string(passed), std::to_string(m.declared_assertions),
           m.config_hash});
    runs.push_back({{"value", values[i]}, {"status", status}, {"error", m.error}, {"output", m.output.string()}});
  }
  t.meta("seed", std::to_string(cfg.seed));
  t.write(out / "summary.csv");
  Json j;
  j["axis"] = axis;
  j["runs"] = runs;
  j["exit_code"] = rep.exit_code();
  j["seed"] = cfg.seed;
  write_json(out / "sweep.json", j);
  return rep;
}

}  // namespace mfbose
