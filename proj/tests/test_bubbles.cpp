#include <doctest.h>

#include <cmath>
#include <vector>

#include "choquard/bubbles.hpp"

using namespace choquard;

TEST_CASE("cutoff shape") {
  const CutoffSpec spec{0.125};
  CHECK(cutoff_eta(spec, 0.0) == 1.0);
  CHECK(cutoff_eta(spec, 0.125) == 1.0);
  CHECK(cutoff_eta(spec, 0.1875) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cutoff_eta(spec, 0.25) == 0.0);
  CHECK(cutoff_eta(spec, 0.9) == 0.0);
  // derivative vanishes at both ends of the transition and is negative inside
  CHECK(cutoff_eta_prime(spec, 0.125) == doctest::Approx(0.0));
  CHECK(cutoff_eta_prime(spec, 0.25) == doctest::Approx(0.0));
  CHECK(cutoff_eta_prime(spec, 0.19) < 0.0);
  // finite-difference consistency inside the transition
  const double h = 1e-7;
  for (double r : {0.14, 0.17, 0.21, 0.24}) {
    const double fd = (cutoff_eta(spec, r + h) - cutoff_eta(spec, r - h)) / (2 * h);
    CHECK(cutoff_eta_prime(spec, r) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("profile table reproduces power laws exactly") {
  std::vector<double> r, u;
  for (int i = 1; i <= 200; ++i) {
    r.push_back(1e-3 * std::pow(1e6, i / 200.0));
    u.push_back(2.0 * std::pow(r.back(), -1.3));
  }
  const RadialProfileTable table(r, u);
  // power laws are straight lines in log-log, monotone cubics keep them
  for (double x : {2e-3, 0.7, 13.0, 900.0})
    CHECK(table(x) == doctest::Approx(2.0 * std::pow(x, -1.3)).epsilon(1e-12));
  // below the first node: extension by the local power law
  CHECK(table(1e-5) == doctest::Approx(2.0 * std::pow(1e-5, -1.3)).epsilon(1e-9));
  CHECK_THROWS(table(1e7));  // beyond the table is a hard error
}

TEST_CASE("bubble field matches the scaling definition at the nodes") {
  std::vector<double> r, u;
  for (int i = 1; i <= 400; ++i) {
    r.push_back(1e-3 * std::pow(1e6, i / 400.0));
    u.push_back(std::pow(r.back(), -0.3) / (1.0 + std::pow(r.back(), 1.5)));
  }
  const RadialProfileTable table(r, u);
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  const CutoffSpec cutoff{0.125};
  const double eps = 0.01;
  const RadialField b = build_bubble(grid, table, eps, cutoff);
  for (int i = 0; i < grid.M(); ++i) {
    const double rr = grid.nodes()[i];
    const double expected =
        cutoff_eta(cutoff, rr) * std::pow(eps, -1.0) * table(rr / eps);
    CHECK(b[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("bubble construction validates the cutoff against the domain") {
  std::vector<double> r = {0.1, 0.5, 1.0, 5.0, 10.0},
                      u = {1.0, 0.7, 0.5, 0.2, 0.1};
  const RadialProfileTable table(r, u);
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  CHECK_THROWS(build_bubble(grid, table, 0.01, CutoffSpec{0.3}));  // 4 delta > R
  CHECK_THROWS(build_bubble(grid, table, 1e-4, CutoffSpec{0.125}));  // table too narrow
}

TEST_CASE("rate fit recovers synthetic exponents") {
  std::vector<std::pair<double, double>> pts;
  for (double eps : log_spaced(1e-3, 1e-1, 10))
    pts.push_back({eps, 5.0 + 0.75 * std::pow(eps, 1.4)});
  const RateFit fit = fit_rate(pts, 5.0);
  CHECK(fit.slope == doctest::Approx(1.4).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("rate fit refuses sign-changing deviations") {
  std::vector<std::pair<double, double>> pts;
  int sign = 1;
  for (double eps : log_spaced(1e-3, 1e-1, 10)) {
    pts.push_back({eps, 5.0 + sign * std::pow(eps, 1.4)});
    sign = -sign;
  }
  CHECK_THROWS(fit_rate(pts, 5.0));
}

TEST_CASE("log spacing endpoints and monotonicity") {
  const auto eps = log_spaced(1e-3, 1e-1, 9);
  REQUIRE(eps.size() == 9);
  CHECK(eps.front() == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(eps.back() == doctest::Approx(1e-1).epsilon(1e-14));
  for (std::size_t i = 1; i < eps.size(); ++i) CHECK(eps[i] > eps[i - 1]);
  const double ratio = eps[1] / eps[0];
  for (std::size_t i = 2; i < eps.size(); ++i)
    CHECK(eps[i] / eps[i - 1] == doctest::Approx(ratio).epsilon(1e-12));
}
