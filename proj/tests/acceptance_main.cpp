// Acceptance gate: one pass/fail line per criterion, exit 1 on any failure.
#include <cstring>
#include <iostream>
#include <string>

#include "choquard/acceptance.hpp"

int main(int argc, char** argv) {
  choquard::AcceptanceOptions opts;
  opts.output_dir = "acceptance-out";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--scale")
      opts.scale = argv[i + 1];
    else if (key == "--cache-dir")
      opts.cache_dir = argv[i + 1];
    else if (key == "--output-dir")
      opts.output_dir = argv[i + 1];
    else if (key == "--seed")
      opts.seed = unsigned(std::stoul(argv[i + 1]));
    else {
      std::cerr << "unknown option " << key << "\n";
      return 2;
    }
  }
  const auto results = choquard::run_acceptance(opts, &std::cout);
  return choquard::all_passed(results) ? 0 : 1;
}
