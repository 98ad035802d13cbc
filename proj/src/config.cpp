#include "choquard/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace choquard {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("BadValue", key + " = " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("BadValue", key + " = " + v);
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

} // namespace

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "command = " << command << "\n"
     << "N = " << params.N << "\n"
     << "alpha = " << fmt(params.alpha) << "\n"
     << "mu = " << fmt(params.mu) << "\n"
     << "lambda = " << fmt(params.lambda) << "\n";
  if (params.q) os << "q = " << fmt(*params.q) << "\n";
  if (params.p) os << "p = " << fmt(*params.p) << "\n";
  os << "R = " << fmt(grid_R) << "\n"
     << "M = " << grid_M << "\n"
     << "beta = " << fmt(grid_beta) << "\n"
     << "problem = " << problem << "\n"
     << "scan_eps_lo = " << fmt(scan_eps_lo) << "\n"
     << "scan_eps_hi = " << fmt(scan_eps_hi) << "\n"
     << "scan_points = " << scan_points << "\n"
     << "cutoff_delta = " << fmt(cutoff_delta) << "\n"
     << "truncation_radius = " << fmt(truncation_radius) << "\n"
     << "eig_count = " << eig_count << "\n"
     << "scale = " << scale << "\n"
     << "output_dir = " << output_dir << "\n"
     << "cache_dir = " << cache_dir << "\n"
     << "seed = " << seed << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("BadConfigFile", "cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("BadConfigFile",
                            path + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> kv = file_values;
  for (const auto& [k, v] : overrides) kv[k] = v;

  RunConfig cfg;
  for (const auto& [k, v] : kv) {
    if (k == "command") cfg.command = v;
    else if (k == "N") cfg.params.N = parse_int(k, v);
    else if (k == "alpha") cfg.params.alpha = parse_double(k, v);
    else if (k == "mu") cfg.params.mu = parse_double(k, v);
    else if (k == "lambda") cfg.params.lambda = parse_double(k, v);
    else if (k == "q") cfg.params.q = parse_double(k, v);
    else if (k == "p") cfg.params.p = parse_double(k, v);
    else if (k == "R") { cfg.grid_R = parse_double(k, v); cfg.params.R = cfg.grid_R; }
    else if (k == "M") cfg.grid_M = parse_int(k, v);
    else if (k == "beta") cfg.grid_beta = parse_double(k, v);
    else if (k == "problem") cfg.problem = v;
    else if (k == "scan_eps_lo") cfg.scan_eps_lo = parse_double(k, v);
    else if (k == "scan_eps_hi") cfg.scan_eps_hi = parse_double(k, v);
    else if (k == "scan_points") cfg.scan_points = parse_int(k, v);
    else if (k == "cutoff_delta") cfg.cutoff_delta = parse_double(k, v);
    else if (k == "truncation_radius") cfg.truncation_radius = parse_double(k, v);
    else if (k == "eig_count") cfg.eig_count = parse_int(k, v);
    else if (k == "scale") cfg.scale = v;
    else if (k == "output_dir") cfg.output_dir = v;
    else if (k == "cache_dir") cfg.cache_dir = v;
    else if (k == "seed") cfg.seed = unsigned(parse_int(k, v));
    else throw ValidationError("UnknownKey", k);
  }
  if (cfg.scale != "quick" && cfg.scale != "full")
    throw ValidationError("BadValue", "scale = " + cfg.scale);
  if (cfg.problem != "linear" && cfg.problem != "superlinear" &&
      cfg.problem != "nonlocal")
    throw ValidationError("BadValue", "problem = " + cfg.problem);
  return cfg;
}

} // namespace choquard
