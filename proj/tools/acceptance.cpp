// Acceptance runner: one pass/fail line per criterion, exit status 0 only if all pass.

#include <cstdio>

#include <CLI11.hpp>

#include "mfbose/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"meanfield-bose-lab acceptance criteria"};
  std::uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;
  std::vector<int> criteria;
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--criteria", criteria, "subset of criterion ids")->delimiter(',')->check(CLI::Range(1, 9));
  app.add_flag("-v,--verbose", verbose, "print every check");
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty())
    for (int id = 1; id <= mfbose::kAcceptanceCriteria; ++id) criteria.push_back(id);

  mfbose::AcceptanceOptions opts{seed, threads};
  int passed = 0;
  for (int id : criteria) {
    const mfbose::CriterionResult r = mfbose::run_criterion(id, opts);
    std::puts(mfbose::format_result(r, verbose).c_str());
    std::fflush(stdout);
    passed += r.pass();
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
