#pragma once

#include <string>
#include <vector>

namespace phasespace::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Suites: fock, algebra, states, distributions, evolution, oracle, all.
/// Throws Error(Config) for an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite);

const std::vector<std::string>& suite_names();

}  // namespace phasespace::cli
