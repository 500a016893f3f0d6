#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfbose {

/// One numeric assertion inside a criterion.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string error;  ///< non-empty when the run threw
  bool pass() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  int threads = 1;
};

inline constexpr int kAcceptanceCriteria = 9;

std::string criterion_name(int id);
double criterion_budget(int id);

/// Runs criterion id (1..9); exceptions are captured into the result.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

/// "[PASS] 3 excitation-spectrum (2.01 s, budget 600 s)"; verbose adds one
/// indented line per check.
std::string format_result(const CriterionResult& r, bool verbose = false);

}  // namespace mfbose
