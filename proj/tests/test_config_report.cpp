#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "choquard/config.hpp"
#include "choquard/report.hpp"

using namespace choquard;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("config file parsing and override precedence") {
  const std::string path = "config-test-tmp.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "N = 5\n"
        << "alpha = 2.5\n"
        << "\n"
        << "mu = 1.0\n"
        << "M = 128\n";
  }
  const auto file_values = parse_config_file(path);
  RunConfig cfg = resolve_config(file_values, {{"mu", "0.75"}});
  CHECK(cfg.params.N == 5);
  CHECK(cfg.params.alpha == 2.5);
  CHECK(cfg.params.mu == 0.75);  // the override wins
  CHECK(cfg.grid_M == 128);
  std::filesystem::remove(path);
}

TEST_CASE("config echo round trip") {
  RunConfig cfg = resolve_config({}, {{"N", "4"}, {"alpha", "2"}, {"mu", "0.5"},
                                      {"seed", "42"}});
  // re-resolving the echoed text reproduces the config
  const std::string path = "config-echo-tmp.cfg";
  {
    std::ofstream out(path);
    out << cfg.echo();
  }
  RunConfig again = resolve_config(parse_config_file(path), {});
  CHECK(again.echo() == cfg.echo());
  CHECK(again.seed == 42u);
  std::filesystem::remove(path);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(resolve_config({}, {{"no_such_key", "1"}}), ValidationError);
  CHECK_THROWS_AS(resolve_config({}, {{"M", "not-a-number"}}),
                  ValidationError);
  try {
    resolve_config({}, {{"no_such_key", "1"}});
  } catch (const ValidationError& e) {
    CHECK(e.code() == "UnknownKey");
  }
}

TEST_CASE("real formatting is locale-free and 17 digits") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0 / 3.0).substr(0, 10) == "0.33333333");
  CHECK(format_real(1.0 / 3.0).find(',') == std::string::npos);
  // 17 significant digits round-trip doubles exactly
  const double x = 3.141592653589793;
  CHECK(std::stod(format_real(x)) == x);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv writer is deterministic and embeds the config echo") {
  const std::string d = "csv-test-tmp";
  std::filesystem::create_directories(d);
  const std::vector<std::string> header = {"x", "y"};
  const std::vector<std::vector<std::string>> rows = {
      {format_real(1.0 / 3.0), format_real(2.0 / 3.0)},
      {format_real(0.1), format_real(0.2)},
  };
  write_csv(d + "/a.csv", header, rows, "seed = 1");
  write_csv(d + "/b.csv", header, rows, "seed = 1");
  const std::string a = slurp(d + "/a.csv");
  CHECK(a == slurp(d + "/b.csv"));
  CHECK(a.find("seed = 1") != std::string::npos);
  CHECK(a.find("x,y") != std::string::npos);

  write_manifest(d, {"a.csv", "b.csv"}, "seed = 1");
  const std::string manifest = slurp(d + "/manifest.json");
  CHECK(manifest.find("a.csv") != std::string::npos);
  CHECK(manifest.find(sha256_hex(a)) != std::string::npos);
  std::filesystem::remove_all(d);
}
