// Command-line front end: one subcommand per experiment kind plus run/sweep.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mfbose/acceptance.hpp"
#include "mfbose/harness.hpp"

using namespace mfbose;

namespace {

struct Globals {
  std::int64_t seed = -1;
  std::string out;
  int threads = 0;
};

void apply_globals(ExperimentConfig& c, const Globals& g) {
  if (g.seed >= 0) c.seed = static_cast<std::uint64_t>(g.seed);
  if (g.threads > 0) c.threads = g.threads;
}

std::filesystem::path out_dir(const ExperimentConfig& c, const Globals& g) {
  if (!g.out.empty()) return g.out;
  if (!c.output.empty()) return c.output;
  return output_root() / to_string(c.kind);
}

int report(const RunManifest& m) {
  for (const auto& a : m.assertions)
    std::printf("[%s] %s = %s (limit %s)\n", !a.applicable ? "n/a " : a.pass ? "PASS" : "FAIL", a.name.c_str(),
                format_number(a.value).c_str(), format_number(a.threshold).c_str());
  if (!m.error.empty()) std::fprintf(stderr, "error: %s\n", m.error.c_str());
  std::printf("%s: %s -> %s (exit %d)\n", m.kind.c_str(), m.config_hash.c_str(), m.output.string().c_str(),
              m.exit_code());
  return m.exit_code();
}

int report(const SweepReport& s) {
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const RunManifest& m = s.runs[i];
    std::printf("%s = %s: exit %d%s%s\n", s.axis.c_str(), format_number(s.values[i]).c_str(), m.exit_code(),
                m.error.empty() ? "" : " error: ", m.error.c_str());
  }
  return s.exit_code();
}

int run_config(ExperimentConfig c, ExperimentKind expected, bool check_kind, const Globals& g) {
  if (check_kind && c.kind != expected)
    throw ConfigError("key 'kind': config declares '" + to_string(c.kind) + "' but the subcommand runs '" +
                      to_string(expected) + "'");
  apply_globals(c, g);
  const std::filesystem::path out = out_dir(c, g);
  if (c.sweep) return report(sweep(c, c.sweep->axis, c.sweep->values, out));
  return report(run_experiment(c, out));
}

ExperimentConfig fig3_defaults() {
  ExperimentConfig c;
  c.kind = ExperimentKind::Fig3;
  c.space = {1, 10.0, 512, Boundary::Dirichlet};
  c.interaction.kind = "lennard-jones";
  c.gp.particles = 10;
  c.gp.hops = 150;
  c.gp.hop_patience = 60;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meanfield-bose-lab: mean-field and Bogoliubov numerics for trapped and periodic Bose gases"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "PRNG seed (overrides the config)");
  app.add_option("--out", g.out, "output directory (default: $MFBOSE_OUTPUT_ROOT/<kind> or runs/<kind>)");
  app.add_option("--threads", g.threads, "worker threads for restarts and sweeps");

  std::string config;
  const std::vector<std::pair<const char*, ExperimentKind>> simple = {
      {"gp-solve", ExperimentKind::GPSolve},   {"bdg-spectrum", ExperimentKind::BdgSpectrum},
      {"ed-spectrum", ExperimentKind::EdSpectrum}, {"dynamics", ExperimentKind::Dynamics}};
  std::vector<std::pair<CLI::App*, ExperimentKind>> simple_cmds;
  for (const auto& [name, kind] : simple) {
    CLI::App* sc = app.add_subcommand(name, "run a " + std::string(name) + " experiment");
    sc->add_option("--config", config, "TOML experiment file")->required()->check(CLI::ExistingFile);
    simple_cmds.emplace_back(sc, kind);
  }

  CLI::App* fig3 = app.add_subcommand("fig3", "Lennard-Jones symmetry-breaking run (built-in defaults)");
  fig3->add_option("--config", config, "TOML experiment file")->check(CLI::ExistingFile);

  DefinettiSection df;
  CLI::App* dfc = app.add_subcommand("definetti-check", "quantitative de Finetti error against its bound");
  dfc->add_option("--dim", df.dim, "one-body dimension")->check(CLI::PositiveNumber);
  dfc->add_option("--n", df.particles, "particle number")->check(CLI::PositiveNumber);
  dfc->add_option("--k", df.k, "marginal order")->check(CLI::PositiveNumber);
  dfc->add_option("--state", df.state, "random | product | maximally-mixed | state file");
  dfc->add_option("--states", df.states, "number of random states")->check(CLI::PositiveNumber);
  dfc->add_option("--rank", df.rank, "rank of random states (0: random)");
  dfc->add_option("--samples", df.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);

  CLI::App* run = app.add_subcommand("run", "run any experiment file (sweeps included)");
  run->add_option("config", config, "TOML experiment file")->required()->check(CLI::ExistingFile);

  std::string axis;
  std::vector<double> values;
  CLI::App* sw = app.add_subcommand("sweep", "independent runs over one ladder axis");
  sw->add_option("config", config, "TOML experiment file")->required()->check(CLI::ExistingFile);
  sw->add_option("--axis", axis, "particles | modes | extent | lambda")->required();
  sw->add_option("--values", values, "axis values")->delimiter(',');

  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9};
  bool verbose = false;
  CLI::App* acc = app.add_subcommand("acceptance", "acceptance criteria with pass/fail lines");
  acc->add_option("--criteria", criteria, "criterion ids")->delimiter(',')->check(CLI::Range(1, 9));
  acc->add_flag("-v,--verbose", verbose, "print every check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [sc, kind] : simple_cmds)
      if (sc->parsed()) return run_config(load_config(config), kind, true, g);
    if (fig3->parsed())
      return run_config(config.empty() ? fig3_defaults() : load_config(config), ExperimentKind::Fig3, true, g);
    if (dfc->parsed()) {
      ExperimentConfig c;
      c.kind = ExperimentKind::DefinettiCheck;
      if (df.k > df.particles) throw ConfigError("key 'definetti.k': must lie in [1, particles]");
      c.definetti = df;
      return run_config(c, c.kind, false, g);
    }
    if (run->parsed()) return run_config(load_config(config), ExperimentKind::GPSolve, false, g);
    if (sw->parsed()) {
      ExperimentConfig c = load_config(config);
      apply_globals(c, g);
      return report(sweep(c, axis, values, out_dir(c, g)));
    }
    if (acc->parsed()) {
      AcceptanceOptions o;
      if (g.seed >= 0) o.seed = static_cast<std::uint64_t>(g.seed);
      if (g.threads > 0) o.threads = g.threads;
      int failed = 0;
      for (int id : criteria) {
        const CriterionResult r = run_criterion(id, o);
        std::puts(format_result(r, verbose).c_str());
        std::fflush(stdout);
        failed += !r.pass();
      }
      return failed ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
