#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasespace/cli/config.hpp"
#include "phasespace/distributions.hpp"

namespace phasespace::cli {

inline constexpr const char* kVersion = "0.1.0";

/// "re_alpha,im_alpha,phi" rows, %.17g, '\n' line endings.
std::string csv_text(const DistributionField& field);

/// Number formatted for file names, e.g. 0.5 -> "0.5", -1 -> "-1".
std::string tag(double x);

/// Writes files into one output directory, attaches provenance sidecars and,
/// when PHASESPACE_GOLDEN_DIR is set, compares every CSV against the file of
/// the same name there.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, const ScenarioConfig& config);

  void write_field(const std::string& name, const DistributionField& field, nlohmann::json extra = {});
  void write_text(const std::string& name, const std::string& text);

  /// Names of golden files that differed; empty when none or no golden dir.
  const std::vector<std::string>& golden_mismatches() const { return mismatches_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void compare_golden(const std::string& name, const std::string& text);

  std::filesystem::path dir_;
  const ScenarioConfig& config_;
  nlohmann::json arbitration_;
  std::vector<std::string> mismatches_;
};

}  // namespace phasespace::cli
