#include "mfbose/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace mfbose {

namespace {

const std::map<ExperimentKind, std::string> kKindNames = {
    {ExperimentKind::GPSolve, "gp-solve"},         {ExperimentKind::BdgSpectrum, "bdg-spectrum"},
    {ExperimentKind::EdSpectrum, "ed-spectrum"},   {ExperimentKind::DefinettiCheck, "definetti-check"},
    {ExperimentKind::Dynamics, "dynamics"},        {ExperimentKind::Fig3, "fig3"},
    {ExperimentKind::Acceptance, "acceptance"},
};

/// Typed reads from one table; every key read is recorded so leftovers can be rejected.
class Reader {
 public:
  Reader(const toml::table* t, std::string path) : t_(t), path_(std::move(path)) {}

  bool present() const { return t_ != nullptr; }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!t_) return;
    const toml::node* n = t_->get(key);
    if (!n) return;
    out = convert<T>(*n, key);
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!t_) return;
    if (const toml::node* n = t_->get(key)) out = convert<T>(*n, key);
  }

  template <class T>
  void get(const char* key, std::vector<T>& out) {
    seen_.insert(key);
    if (!t_) return;
    const toml::node* n = t_->get(key);
    if (!n) return;
    const toml::array* a = n->as_array();
    if (!a) fail(key, "expected an array");
    out.clear();
    for (const auto& e : *a) out.push_back(convert<T>(e, key));
  }

  Reader sub(const char* key) {
    seen_.insert(key);
    if (!t_) return {nullptr, name(key)};
    const toml::node* n = t_->get(key);
    if (!n) return {nullptr, name(key)};
    if (!n->is_table()) fail(key, "expected a table");
    return {n->as_table(), name(key)};
  }

  /// Rejects keys that were never read.
  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_)
      if (!seen_.count(std::string(k.str()))) throw ConfigError("unknown key '" + name(std::string(k.str())) + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("key '" + name(key) + "': " + what);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <class T>
  T convert(const toml::node& n, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (auto v = n.value_exact<bool>()) return *v;
      fail(key, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (auto v = n.value_exact<std::int64_t>()) {
        if (*v < 0 && std::is_unsigned_v<T>) fail(key, "expected a non-negative integer");
        return static_cast<T>(*v);
      }
      fail(key, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (auto v = n.value<double>()) return *v;
      fail(key, "expected a number");
    } else {
      if (auto v = n.value_exact<std::string>()) return *v;
      fail(key, "expected a string");
    }
  }

  const toml::table* t_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "': " + what);
}

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  std::string s = b;
  if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
  return s;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += num(v[i]);
    else s += std::to_string(v[i]);
  }
  return s + "]";
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string to_string(ExperimentKind k) { return kKindNames.at(k); }

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (const auto& [k, n] : kKindNames)
    if (n == s) return k;
  throw ConfigError("key 'kind': unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
  ExperimentConfig c;
  Reader r(&root, "");
  std::string kind = "gp-solve";
  r.get("kind", kind);
  c.kind = experiment_kind_from_string(kind);
  std::int64_t seed = 0;
  r.get("seed", seed);
  require(seed >= 0, "seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  r.get("threads", c.threads);
  require(c.threads >= 1, "threads", "must be at least 1");
  r.get("output", c.output);

  {
    Reader s = r.sub("space");
    std::string boundary = to_string(c.space.boundary);
    s.get("dimension", c.space.dimension);
    s.get("extent", c.space.extent);
    s.get("grid", c.space.grid);
    s.get("boundary", boundary);
    try {
      c.space.boundary = boundary_from_string(boundary);
    } catch (const Error&) {
      s.fail("boundary", "expected 'periodic' or 'dirichlet'");
    }
    require(c.space.dimension == 1 || c.space.dimension == 2, "space.dimension", "must be 1 or 2");
    require(c.space.extent > 0.0, "space.extent", "must be positive");
    require(c.space.grid >= 2, "space.grid", "must be at least 2");
    s.finish();
  }
  {
    Reader s = r.sub("potential");
    s.get("kind", c.potential.kind);
    s.get("omega", c.potential.omega);
    s.get("center", c.potential.center);
    require(c.potential.kind == "zero" || c.potential.kind == "harmonic", "potential.kind",
            "expected 'zero' or 'harmonic'");
    s.finish();
  }
  {
    Reader s = r.sub("interaction");
    s.get("kind", c.interaction.kind);
    s.get("coefficients", c.interaction.coefficients);
    s.get("amplitude", c.interaction.amplitude);
    s.get("width", c.interaction.width);
    s.get("cap", c.interaction.cap);
    s.get("path", c.interaction.path);
    s.get("scale", c.interaction_scale);
    static const std::set<std::string> kinds{"cosine", "gaussian", "lennard-jones", "constant", "zero", "csv"};
    require(kinds.count(c.interaction.kind) > 0, "interaction.kind", "unknown kind '" + c.interaction.kind + "'");
    s.finish();
  }
  {
    Reader s = r.sub("gp");
    s.get("coupling", c.gp.coupling);
    s.get("particles", c.gp.particles);
    s.get("restarts", c.gp.restarts);
    s.get("tol_resid", c.gp.tol_resid);
    s.get("max_iter", c.gp.max_iter);
    s.get("hops", c.gp.hops);
    s.get("hop_patience", c.gp.hop_patience);
    s.get("hop_amplitude", c.gp.hop_amplitude);
    s.get("method", c.gp.method);
    require(c.gp.particles >= 1, "gp.particles", "must be at least 1");
    require(c.gp.restarts >= 1, "gp.restarts", "must be at least 1");
    require(c.gp.tol_resid > 0.0, "gp.tol_resid", "must be positive");
    require(c.gp.method == "cg" || c.gp.method == "gradient", "gp.method", "expected 'cg' or 'gradient'");
    s.finish();
  }
  {
    Reader s = r.sub("bdg");
    s.get("particles", c.bdg.particles);
    s.get("levels", c.bdg.levels);
    s.get("extents", c.bdg.extents);
    s.get("k_max", c.bdg.k_max);
    s.get("width", c.bdg.width);
    require(c.bdg.particles >= 2, "bdg.particles", "must be at least 2");
    s.finish();
  }
  {
    Reader s = r.sub("ed");
    s.get("modes", c.ed.modes);
    s.get("basis", c.ed.basis);
    s.get("particles", c.ed.particles);
    s.get("levels", c.ed.levels);
    s.get("n_max", c.ed.n_max);
    require(c.ed.modes >= 2, "ed.modes", "must be at least 2");
    require(c.ed.basis == "plane-waves" || c.ed.basis == "eigenmodes", "ed.basis",
            "expected 'plane-waves' or 'eigenmodes'");
    for (int N : c.ed.particles) require(N >= 2, "ed.particles", "entries must be at least 2");
    s.finish();
  }
  {
    Reader s = r.sub("definetti");
    s.get("dim", c.definetti.dim);
    s.get("particles", c.definetti.particles);
    s.get("k", c.definetti.k);
    s.get("samples", c.definetti.samples);
    s.get("state", c.definetti.state);
    s.get("states", c.definetti.states);
    s.get("rank", c.definetti.rank);
    require(c.definetti.dim >= 1, "definetti.dim", "must be positive");
    require(c.definetti.k >= 1 && c.definetti.k <= c.definetti.particles, "definetti.k", "must lie in [1, particles]");
    require(c.definetti.samples >= 2, "definetti.samples", "must be at least 2");
    require(!c.definetti.state.empty(), "definetti.state",
            "expected 'random', 'product', 'maximally-mixed' or a state file path");
    s.finish();
  }
  {
    Reader s = r.sub("dynamics");
    s.get("T", c.dynamics.T);
    s.get("dt", c.dynamics.dt);
    s.get("modes", c.dynamics.modes);
    s.get("particles", c.dynamics.particles);
    s.get("n_max", c.dynamics.n_max);
    s.get("times", c.dynamics.times);
    s.get("initial_re", c.dynamics.initial_re);
    s.get("initial_im", c.dynamics.initial_im);
    s.get("grid_T", c.dynamics.grid_T);
    require(c.dynamics.dt > 0.0, "dynamics.dt", "must be positive");
    require(c.dynamics.T >= 0.0, "dynamics.T", "must be non-negative");
    require(static_cast<int>(c.dynamics.initial_re.size()) == c.dynamics.modes &&
                c.dynamics.initial_im.size() == c.dynamics.initial_re.size(),
            "dynamics.initial_re", "needs one entry per mode in both initial_re and initial_im");
    s.finish();
  }
  {
    Reader s = r.sub("sweep");
    if (s.present()) {
      SweepSection sw;
      s.get("axis", sw.axis);
      s.get("values", sw.values);
      static const std::set<std::string> axes{"particles", "modes", "extent", "lambda"};
      require(axes.count(sw.axis) > 0, "sweep.axis", "expected particles, modes, extent or lambda");
      c.sweep = sw;
    }
    s.finish();
  }
  {
    Reader s = r.sub("acceptance");
    s.get("criteria", c.acceptance.criteria);
    for (int id : c.acceptance.criteria) require(id >= 1 && id <= 9, "acceptance.criteria", "entries must lie in 1..9");
    s.finish();
  }
  r.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_axis(ExperimentConfig& c, const std::string& axis, double value) {
  const int n = static_cast<int>(std::lround(value));
  if (axis == "particles") {
    if (n < 2 || std::abs(value - n) > 1e-12) throw ConfigError("particles axis needs integers >= 2");
    c.gp.particles = n;
    c.bdg.particles = n;
    c.definetti.particles = n;
    c.ed.particles = {n};
    c.dynamics.particles = {n};
  } else if (axis == "modes") {
    if (n < 2 || std::abs(value - n) > 1e-12) throw ConfigError("modes axis needs integers >= 2");
    c.ed.modes = n;
  } else if (axis == "extent") {
    if (!(value > 0.0)) throw ConfigError("extent axis needs positive values");
    c.space.extent = value;
    c.bdg.extents = {value};
  } else if (axis == "lambda") {
    if (!(value > 0.0)) throw ConfigError("lambda axis needs positive values");
    const double g = c.gp.coupling.value_or(c.gp.particles - 1.0);
    c.gp.coupling = g * value;
    c.interaction_scale /= value;
  } else {
    throw ConfigError("key 'sweep.axis': unknown axis '" + axis + "'");
  }
}

RVec make_potential(const PotentialSpec& p, const ModelSpace& sp) {
  RVec v = RVec::Zero(sp.size());
  if (p.kind == "harmonic") {
    for (int j = 0; j < sp.size(); ++j) {
      const Point x = sp.position(j);
      double r2 = 0.0;
      for (int a = 0; a < sp.dimension(); ++a) r2 += (x[a] - p.center) * (x[a] - p.center);
      v(j) = 0.25 * p.omega * p.omega * r2;
    }
  }
  return v;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream o;
  o << "kind = " << quote(to_string(kind)) << "\nseed = " << seed << "\n";
  o << "\n[space]\ndimension = " << space.dimension << "\nextent = " << num(space.extent)
    << "\ngrid = " << space.grid << "\nboundary = " << quote(to_string(space.boundary)) << "\n";
  o << "\n[potential]\nkind = " << quote(potential.kind) << "\nomega = " << num(potential.omega)
    << "\ncenter = " << num(potential.center) << "\n";
  o << "\n[interaction]\nkind = " << quote(interaction.kind) << "\ncoefficients = " << list(interaction.coefficients)
    << "\namplitude = " << num(interaction.amplitude) << "\nwidth = " << num(interaction.width)
    << "\ncap = " << num(interaction.cap) << "\npath = " << quote(interaction.path)
    << "\nscale = " << num(interaction_scale) << "\n";
  o << "\n[gp]\n";
  if (gp.coupling) o << "coupling = " << num(*gp.coupling) << "\n";
  o << "particles = " << gp.particles << "\nrestarts = " << gp.restarts << "\ntol_resid = " << num(gp.tol_resid)
    << "\nmax_iter = " << gp.max_iter << "\nhops = " << gp.hops << "\nhop_patience = " << gp.hop_patience
    << "\nhop_amplitude = " << num(gp.hop_amplitude) << "\nmethod = " << quote(gp.method) << "\n";
  o << "\n[bdg]\nparticles = " << bdg.particles << "\nlevels = " << bdg.levels << "\nextents = " << list(bdg.extents)
    << "\nk_max = " << num(bdg.k_max) << "\nwidth = " << num(bdg.width) << "\n";
  o << "\n[ed]\nmodes = " << ed.modes << "\nbasis = " << quote(ed.basis) << "\nparticles = " << list(ed.particles)
    << "\nlevels = " << ed.levels << "\nn_max = " << ed.n_max << "\n";
  o << "\n[definetti]\ndim = " << definetti.dim << "\nparticles = " << definetti.particles << "\nk = " << definetti.k
    << "\nsamples = " << definetti.samples << "\nstate = " << quote(definetti.state)
    << "\nstates = " << definetti.states << "\nrank = " << definetti.rank << "\n";
  o << "\n[dynamics]\nT = " << num(dynamics.T) << "\ndt = " << num(dynamics.dt) << "\nmodes = " << dynamics.modes
    << "\nparticles = " << list(dynamics.particles) << "\nn_max = " << dynamics.n_max
    << "\ntimes = " << list(dynamics.times) << "\ninitial_re = " << list(dynamics.initial_re)
    << "\ninitial_im = " << list(dynamics.initial_im) << "\ngrid_T = " << num(dynamics.grid_T) << "\n";
  if (sweep) o << "\n[sweep]\naxis = " << quote(sweep->axis) << "\nvalues = " << list(sweep->values) << "\n";
  o << "\n[acceptance]\ncriteria = " << list(acceptance.criteria) << "\n";
  return o.str();
}

std::string ExperimentConfig::hash() const {
  char b[17];
  std::snprintf(b, sizeof b, "%016" PRIx64, fnv1a64(canonical()));
  return b;
}

}  // namespace mfbose
