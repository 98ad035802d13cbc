#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "choquard/grid.hpp"

using namespace choquard;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("node law and exact cell weights") {
  RadialGrid grid(GridSpec{2.0, 64, 2.0}, 3, 1.0);
  const auto& r = grid.nodes();
  REQUIRE(r.size() == 64);
  for (int i = 1; i <= 64; ++i)
    CHECK(r[i - 1] ==
          doctest::Approx(2.0 * std::pow(i / 65.0, 2.0)).epsilon(1e-15));
  CHECK(r.front() > 0.0);  // no node at the origin
  double vol = 0.0;
  for (double w : grid.weights()) vol += w;
  CHECK(vol == doctest::Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-14));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(RadialGrid(GridSpec{1.0, 8, 2.0}, 3, 1.0), ValidationError);
  CHECK_THROWS_AS(RadialGrid(GridSpec{1.0, 64, 0.5}, 3, 1.0), ValidationError);
  CHECK_THROWS_AS(RadialGrid(GridSpec{-1.0, 64, 2.0}, 3, 1.0), ValidationError);
  CHECK_THROWS_AS(RadialGrid(GridSpec{1.0, 64, 2.0}, 3, 3.5), ValidationError);
}

TEST_CASE("angular average of the Newton kernel is 1/max(r,s)") {
  for (const auto& [r, s] : {std::pair{0.3, 0.8}, {1.0, 0.1}, {0.5, 0.5001}})
    CHECK(angular_kernel(3, 1.0, r, s) ==
          doctest::Approx(1.0 / std::max(r, s)).epsilon(1e-10));
}

TEST_CASE("angular average for N=3, alpha=2 has the log closed form") {
  for (const auto& [r, s] : {std::pair{0.3, 0.8}, {1.0, 0.2}, {0.4, 0.9}}) {
    const double exact = std::log((r + s) / std::fabs(r - s)) / (2.0 * r * s);
    CHECK(angular_kernel(3, 2.0, r, s) == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("uniform-ball Coulomb energy anchor") {
  RadialGrid grid(GridSpec{1.0, 256, 1.5}, 3, 1.0);
  std::vector<double> one(grid.M(), 1.0);
  // self-energy convention: half of the raw double integral 32 pi^2 / 15
  CHECK(0.5 * grid.kernel_pairing(one, one) ==
        doctest::Approx(16.0 * kPi * kPi / 15.0).epsilon(1e-3));
}

TEST_CASE("kernel symmetry and positivity") {
  RadialGrid grid(GridSpec{1.0, 32, 2.0}, 4, 2.0);
  for (int i = 0; i < 32; i += 5)
    for (int j = 0; j < 32; j += 5) {
      CHECK(grid.kernel(i, j) == grid.kernel(j, i));
      CHECK(grid.kernel(i, j) > 0.0);
    }
  CHECK_FALSE(grid.diagonal_clipped());
  RadialGrid clipped(GridSpec{1.0, 32, 2.0}, 3, 2.5);
  CHECK(clipped.diagonal_clipped());
}

TEST_CASE("kernel cache round trip") {
  const std::string dir = "cache-test-tmp";
  std::filesystem::remove_all(dir);
  RadialGrid g1(GridSpec{1.0, 32, 2.0}, 3, 1.0, dir);
  const double v = g1.kernel(3, 17);  // forces build + save
  CHECK(std::filesystem::exists(dir));
  RadialGrid g2(GridSpec{1.0, 32, 2.0}, 3, 1.0, dir);  // loads
  CHECK(g2.kernel(3, 17) == v);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) CHECK(g1.kernel(i, j) == g2.kernel(i, j));
  std::filesystem::remove_all(dir);
}

TEST_CASE("kernel quadrature refines under M-doubling") {
  // Coulomb anchor error must shrink when M doubles
  const double exact = 16.0 * kPi * kPi / 15.0;
  double prev = 1e300;
  for (int M : {32, 64, 128}) {
    RadialGrid grid(GridSpec{1.0, M, 1.5}, 3, 1.0);
    std::vector<double> one(grid.M(), 1.0);
    const double err = std::fabs(grid.kernel_pairing(one, one) - exact);
    CHECK(err < prev);
    prev = err;
  }
}
