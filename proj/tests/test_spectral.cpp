#include <doctest.h>

#include <cmath>

#include "choquard/spectral.hpp"

using namespace choquard;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("radial Dirichlet eigenvalues of the unit ball in R^3 are (k pi)^2") {
  RadialGrid grid(GridSpec{1.0, 1024, 1.0}, 3, 1.0);
  Params prm;
  prm.N = 3;
  prm.alpha = 1.0;
  const auto pairs = eigenpairs(grid, prm, 3);
  for (int k = 1; k <= 3; ++k)
    CHECK(pairs[k - 1].lambda_k ==
          doctest::Approx(k * k * kPi * kPi).epsilon(1e-4));
  CHECK(pairs[0].residual <= 1e-8 * pairs[0].lambda_k);
}

TEST_CASE("eigenvalue scaling in the radius") {
  Params prm;
  prm.N = 3;
  prm.alpha = 1.0;
  RadialGrid g1(GridSpec{1.0, 512, 1.0}, 3, 1.0);
  RadialGrid g3(GridSpec{3.0, 512, 1.0}, 3, 1.0);
  prm.R = 1.0;
  const double l1 = lambda1(g1, prm);
  prm.R = 3.0;
  const double l3 = lambda1(g3, prm);
  CHECK(l3 == doctest::Approx(l1 / 9.0).epsilon(1e-8));
}

TEST_CASE("Hardy term lowers the first eigenvalue") {
  RadialGrid grid(GridSpec{1.0, 512, 1.5}, 4, 2.0);
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.0;
  const double l0 = lambda1(grid, prm);
  prm.mu = 0.5;
  const double l5 = lambda1(grid, prm);
  CHECK(l5 < l0);
  CHECK(l5 > 0.0);  // operator stays coercive below mu_bar
}

TEST_CASE("eigenfields are B-orthonormal") {
  RadialGrid grid(GridSpec{1.0, 256, 1.0}, 3, 1.0);
  Params prm;
  prm.N = 3;
  prm.alpha = 1.0;
  const auto pairs = eigenpairs(grid, prm, 3);
  const auto& w = grid.weights();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (int i = 0; i < grid.M(); ++i)
        dot += w[i] * pairs[a].eigenfield[i] * pairs[b].eigenfield[i];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-7));
    }
}

TEST_CASE("spectral runs reject mu at or above critical") {
  RadialGrid grid(GridSpec{1.0, 64, 1.0}, 4, 2.0);
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 1.0;  // mu_bar exactly
  CHECK_THROWS_AS(eigenpairs(grid, prm, 1), ValidationError);
  prm.mu = -0.5;
  CHECK_THROWS_AS(eigenpairs(grid, prm, 1), ValidationError);
}
