#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opdyn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // observed value, tolerance, notes
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool known_deviation = false;  // red, but pinned, analyzed and documented
  std::vector<CheckResult> checks;
};

SuiteReport verify_closed_forms();
SuiteReport verify_oracle_agreement();
SuiteReport verify_propositions();
/// Regenerates every figure CSV with the given seed and byte-diffs it against
/// the committed goldens.
SuiteReport verify_figures(const std::string& config_dir, const std::string& golden_dir,
                           uint64_t seed);

/// All thirteen acceptance criteria. quick trims the Monte Carlo budgets for
/// interactive runs; the full budgets are used by the test suite.
std::vector<CriterionResult> run_acceptance(uint64_t seed, bool quick = false);

}  // namespace opdyn
