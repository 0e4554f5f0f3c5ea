#pragma once

// Scenario configuration, a single JSON document:
//
// {
//   "state":  {"type": "coherent", "alpha0": [1.0, 0.0]},
//   "orders": [0.0, 0.5],                       // or "order": 0.0
//   "grid":   {"half_width": 6.0, "points": 121},
//   "cutoff": 40,
//   "model":  {"type": "kerr-damped", "omega": 1, "chi": 0, "gamma": 1, "nbar": 0},
//   "times":  [0, 0.5, 1.0],
//   "method": "closed-form",                    // closed-form | oracle | both
//   "kernel": false,
//   "dt": 0,
//   "suite": "all",
//   "output": "out"
// }
//
// State types: coherent {alpha0}, thermal-coherent {alpha0, f},
// squeezed-thermal-coherent {alpha0, z, f}, number-diagonal {p}.
// Model types: kerr-damped {omega, chi, gamma, nbar}, phase-insensitive {kappa}.
// Complex numbers are [re, im] pairs or plain reals. Unknown keys are errors.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasespace/evolution.hpp"
#include "phasespace/states.hpp"

namespace phasespace::cli {

struct GridSpec {
  double half_width = 0.0;  // 0: |alpha0| + 5
  int points = 121;
};

enum class MethodChoice { Auto, ClosedForm, Oracle, Both };

struct ScenarioConfig {
  std::optional<StateSpec> state;
  std::vector<double> orders;
  GridSpec grid;
  std::optional<MasterEquationParams> model;
  std::vector<double> times;
  int cutoff = kDefaultCutoff;
  MethodChoice method = MethodChoice::Auto;
  bool kernel = false;
  double dt = 0.0;
  std::string suite;
  std::string output = "out";
  std::uint64_t hash = 0;
};

std::uint64_t fnv1a(std::string_view bytes);

MethodChoice parse_method(const std::string& name);
std::string_view method_choice_name(MethodChoice m);

/// Parses and validates a configuration document. Throws Error(Config).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

PhaseSpaceGrid resolve_grid(const ScenarioConfig& config);

}  // namespace phasespace::cli
