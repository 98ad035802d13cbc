#pragma once

#include <map>
#include <string>

#include "choquard/params.hpp"

namespace choquard {

/// Flat key=value run configuration. Unknown keys are rejected at
/// resolve time; command-line overrides win over file values.
struct RunConfig {
  std::string command;
  Params params;
  double grid_R = 1.0;
  int grid_M = 256;
  double grid_beta = 2.0;
  std::string problem = "linear";
  double scan_eps_lo = 1e-3;
  double scan_eps_hi = 1e-1;
  int scan_points = 12;
  double cutoff_delta = 0.125;
  double truncation_radius = 1e3;  ///< whole-space runs (extremal, constants)
  int eig_count = 4;
  std::string scale = "quick";     ///< verify-all: quick | full
  std::string output_dir = "out";
  std::string cache_dir = ".kernel-cache";
  unsigned seed = 1;

  /// Exact resolved key=value text, echoed into every output file.
  std::string echo() const;
};

/// Parses `key = value` lines; '#' comments and blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Builds a RunConfig from file values overlaid with overrides.
/// Throws ValidationError("UnknownKey" | "BadValue") on bad input.
RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides);

} // namespace choquard
