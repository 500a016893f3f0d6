#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mfbose/harness.hpp"

using namespace mfbose;
namespace fs = std::filesystem;

namespace {

const char* kEdConfig = R"(
kind = "ed-spectrum"
seed = 3

[space]
extent = 6.283185307179586
grid = 32
boundary = "periodic"

[interaction]
kind = "cosine"
coefficients = [1.0, 1.0]

[ed]
modes = 4
particles = [4, 6]
levels = 3
n_max = 8
)";

const char* kGpConfig = R"(
kind = "gp-solve"
seed = 1

[space]
extent = 8.0
grid = 64
boundary = "dirichlet"

[potential]
kind = "harmonic"
omega = 1.0
center = 4.0

[interaction]
kind = "gaussian"
width = 0.5

[gp]
particles = 6
restarts = 2
)";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mfbose_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("unknown keys are rejected by name") {
    const std::string msg = error_of("kind = \"gp-solve\"\n[space]\ngird = 32\n");
    CHECK(msg.find("space.gird") != std::string::npos);
    CHECK(error_of("kind = \"gp-solve\"\ncolour = 1\n").find("colour") != std::string::npos);
  }

  TEST_CASE("type and range errors name the key") {
    CHECK(error_of("kind = \"gp-solve\"\n[gp]\nparticles = \"ten\"\n").find("gp.particles") != std::string::npos);
    CHECK(error_of("kind = \"gp-solve\"\n[space]\ngrid = 1\n").find("space.grid") != std::string::npos);
    CHECK(error_of("kind = \"teleport\"\n").find("kind") != std::string::npos);
    CHECK_FALSE(error_of("kind = ").empty());
  }

  TEST_CASE("hash covers the physics and ignores threads and output") {
    const auto a = parse_config(kGpConfig);
    auto b = a;
    b.threads = 4;
    b.output = "elsewhere";
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.gp.particles = 7;
    CHECK(a.hash() != b.hash());
    CHECK(parse_config(a.canonical()).hash() == a.hash());
  }

  TEST_CASE("ladder axes") {
    auto c = parse_config(kEdConfig);
    apply_axis(c, "particles", 9);
    CHECK(c.ed.particles == std::vector<int>{9});
    apply_axis(c, "modes", 3);
    CHECK(c.ed.modes == 3);
    CHECK_THROWS_AS(apply_axis(c, "colour", 1), ConfigError);
  }

  TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  }
}

TEST_SUITE("output") {
  TEST_CASE("CSV layout and round-trip numbers") {
    CsvTable t({"x", "y"});
    t.meta("seed", "5");
    t.row(std::vector<double>{0.1, 1.0 / 3.0});
    const std::string s = t.str();
    CHECK(s.rfind(std::string(kFileHeader) + "\n# seed = 5\nx,y\n", 0) == 0);
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(0.1) == "0.1");
  }

  TEST_CASE("output root resolution") {
    CHECK(output_root("explicit") == fs::path("explicit"));
    setenv("MFBOSE_OUTPUT_ROOT", "from_env", 1);
    CHECK(output_root() == fs::path("from_env"));
    unsetenv("MFBOSE_OUTPUT_ROOT");
    CHECK(output_root() == fs::path("runs"));
  }
}

TEST_SUITE("runs") {
  TEST_CASE("an experiment writes its artifacts, all assertions and the seed") {
    const auto cfg = parse_config(kEdConfig);
    const fs::path out = scratch("ed");
    const auto m = run_experiment(cfg, out);
    CHECK(m.error.empty());
    CHECK(m.exit_code() == 0);
    CHECK(static_cast<int>(m.assertions.size()) == declared_assertions(cfg));
    CHECK(m.declared_assertions == declared_assertions(cfg));
    for (const char* f : {"eigs.csv", "rdm.json", "decomposition.csv", "manifest.json"}) CHECK(fs::exists(out / f));
    const Json j = Json::parse(slurp(out / "manifest.json"));
    CHECK(j["seed"] == 3);
    CHECK(j["config_hash"] == cfg.hash());
    CHECK(slurp(out / "eigs.csv").rfind(kFileHeader, 0) == 0);
  }

  TEST_CASE("identical configurations give byte-identical artifacts") {
    const auto cfg = parse_config(kGpConfig);
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    CHECK(run_experiment(cfg, a).exit_code() == 0);
    auto cfg2 = cfg;
    cfg2.threads = 3;
    CHECK(run_experiment(cfg2, b).exit_code() == 0);
    for (const char* f : {"solution.csv", "summary.json"}) CHECK(slurp(a / f) == slurp(b / f));
  }

  TEST_CASE("Monte Carlo outputs reproduce for equal seeds") {
    auto cfg = parse_config("kind = \"definetti-check\"\nseed = 4\n[definetti]\nsamples = 20000\nstates = 3\n");
    const fs::path a = scratch("mc_a"), b = scratch("mc_b");
    CHECK(run_experiment(cfg, a).exit_code() == 0);
    CHECK(run_experiment(cfg, b).exit_code() == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  }

  TEST_CASE("runtime failures map to exit code 2 with context") {
    auto cfg = parse_config(kEdConfig);
    cfg.ed.modes = 40;  // more plane waves than the grid holds
    const auto m = run_experiment(cfg, scratch("bad"));
    CHECK(m.exit_code() == 2);
    CHECK_FALSE(m.error.empty());
  }

  TEST_CASE("assertion failures map to exit code 1") {
    RunManifest m;
    m.declared_assertions = 2;
    m.assertions = {{"a", 0.0, 1.0, true, true}, {"b", 2.0, 1.0, false, true}};
    CHECK_FALSE(m.all_pass());
    CHECK(m.exit_code() == 1);
    m.assertions[1].pass = true;
    CHECK(m.exit_code() == 0);
  }

  TEST_CASE("an empty sweep is a no-op") {
    const auto cfg = parse_config(kEdConfig);
    const auto r = sweep(cfg, "particles", {}, scratch("empty"));
    CHECK(r.runs.empty());
    CHECK(r.exit_code() == 0);
  }

  TEST_CASE("sweep failures stay isolated") {
    auto cfg = parse_config(kEdConfig);
    cfg.threads = 2;
    const fs::path out = scratch("sweep");
    const auto r = sweep(cfg, "modes", {3, 40, 4}, out);
    REQUIRE(r.runs.size() == 3);
    CHECK(r.runs[0].exit_code() == 0);
    CHECK(r.runs[1].exit_code() == 2);
    CHECK(r.runs[2].exit_code() == 0);
    CHECK(r.exit_code() == 2);
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "sweep.json"));
  }
}
