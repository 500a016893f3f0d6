#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfbose/config.hpp"
#include "mfbose/output.hpp"

namespace mfbose {

struct Assertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// False when the check does not apply to this configuration (counted, always passing).
  bool applicable = true;
};

struct OpTiming {
  std::string op;
  double seconds = 0.0;
};

struct RunManifest {
  std::string kind;
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  std::vector<OpTiming> timings;
  std::vector<Assertion> assertions;
  std::vector<std::string> artifacts;
  int declared_assertions = 0;
  std::string error;  ///< configuration or runtime failure, with context

  bool all_pass() const;
  /// 0 all pass, 1 assertion failures, 2 configuration or runtime error.
  int exit_code() const;
  Json to_json() const;
};

/// Number of assertions an experiment of this configuration declares.
int declared_assertions(const ExperimentConfig& cfg);

/// Runs one experiment, writes its artifacts and manifest.json under out.
/// Errors are captured into the manifest rather than thrown.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct SweepReport {
  std::string axis;
  std::vector<double> values;
  std::vector<RunManifest> runs;
  int exit_code() const;
};

/// Independent runs over one ladder axis (parallel up to cfg.threads), each
/// in out/<axis>-<value>; failures are isolated per run. Writes summary.csv
/// and sweep.json under out.
SweepReport sweep(const ExperimentConfig& cfg, const std::string& axis, const std::vector<double>& values,
                  const std::filesystem::path& out);

}  // namespace mfbose
