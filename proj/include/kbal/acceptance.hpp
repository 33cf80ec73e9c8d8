#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kbal::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs the full acceptance suite (criteria 1-9), printing one pass/fail
/// line per criterion to `log`. All parameters, tolerances and thresholds
/// are pinned here in code.
std::vector<CriterionResult> run_all(std::ostream& log);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace kbal::acceptance
