#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace choquard {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string scale = "quick";  ///< quick | full
  std::string cache_dir = ".kernel-cache";
  std::string output_dir;       ///< artifacts + determinism files when nonempty
  unsigned seed = 1;
};

/// Runs the ten acceptance checks in order, streaming one line per check to
/// `log` when given. A check that throws is reported failed, never fatal.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts,
                                        std::ostream* log = nullptr);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace choquard
