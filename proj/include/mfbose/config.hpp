#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfbose/lattice_model.hpp"

namespace mfbose {

enum class ExperimentKind { GPSolve, BdgSpectrum, EdSpectrum, DefinettiCheck, Dynamics, Fig3, Acceptance };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct PotentialSpec {
  std::string kind = "zero";  // zero | harmonic
  double omega = 1.0;         // V = omega^2 |x - center|^2 / 4
  double center = 0.0;
};

struct GPSection {
  std::optional<double> coupling;  ///< explicit g; otherwise N - 1
  int particles = 10;
  int restarts = 8;
  double tol_resid = 1e-9;
  int max_iter = 50000;
  int hops = 0;
  int hop_patience = 10;
  double hop_amplitude = 3.0;
  std::string method = "cg";  // cg | gradient
};

struct BdgSection {
  int particles = 10;
  int levels = 10;
  std::vector<double> extents;  ///< torus extents for the second-order extrapolation
  double k_max = 40.0;
  double width = 1.0;           ///< Gaussian transform width for the second-order term
};

struct EdSection {
  int modes = 5;
  std::string basis = "plane-waves";  // plane-waves | eigenmodes
  std::vector<int> particles{6, 10, 14, 18};
  int levels = 5;
  int n_max = 12;
};

struct DefinettiSection {
  int dim = 2;
  int particles = 10;
  int k = 1;
  int samples = 100000;
  std::string state = "random";  // random | product | maximally-mixed | path to a state file
  int states = 20;
  int rank = 0;  ///< 0 draws a random rank per state
};

struct DynamicsSection {
  double T = 0.5;
  double dt = 0.01;
  int modes = 3;
  std::vector<int> particles{4, 8, 12};
  int n_max = 12;
  std::vector<double> times{0.0, 0.25, 0.5};
  std::vector<double> initial_re{1.0, 0.5, 0.0};
  std::vector<double> initial_im{0.0, 0.0, 0.3};
  double grid_T = 5.0;  ///< horizon of the grid GP run
};

struct SweepSection {
  std::string axis;  // particles | modes | extent | lambda
  std::vector<double> values;
};

struct AcceptanceSection {
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9};
};

/// Parsed, validated experiment description.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::GPSolve;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output;
  ModelConfig space;
  PotentialSpec potential;
  InteractionSpec interaction;
  double interaction_scale = 1.0;  ///< w is multiplied by this factor
  GPSection gp;
  BdgSection bdg;
  EdSection ed;
  DefinettiSection definetti;
  DynamicsSection dynamics;
  std::optional<SweepSection> sweep;
  AcceptanceSection acceptance;

  /// Canonical TOML rendering of every resolved field (sorted, fixed precision).
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Throws ConfigError naming the offending key for unknown keys, wrong types
/// or out-of-range values.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::string& path);

/// Sets one ladder parameter: particles, modes, extent or lambda (the
/// interaction is divided by lambda and the particle number scaled by it).
void apply_axis(ExperimentConfig& cfg, const std::string& axis, double value);

RVec make_potential(const PotentialSpec& p, const ModelSpace& sp);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace mfbose
