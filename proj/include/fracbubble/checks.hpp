#pragma once

#include <string>
#include <vector>

#include "fracbubble/config.hpp"

namespace fracbubble {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

std::vector<std::string> check_names();
// Runs every check of the invariant suite in a fixed order. A check that throws is
// reported as failed with the error code in `detail`.
std::vector<CheckResult> run_checks(const RunConfig& c, int threads);

}  // namespace fracbubble
