#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "phasespace/cli/config.hpp"
#include "phasespace/errors.hpp"

namespace phasespace::cli {

struct RunOptions {
  std::optional<MethodChoice> method;
  bool oracle = false;
  std::optional<std::string> out;
  std::string suite;
};

/// 1 for numerical failures, 2 for usage, configuration and input errors.
int exit_code_for(ErrorKind kind);

int cmd_dist(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);
int cmd_evolve(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);
int cmd_sweep(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);
int cmd_verify(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace phasespace::cli
