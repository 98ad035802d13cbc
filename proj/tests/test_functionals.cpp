#include <doctest.h>

#include <cmath>
#include <random>

#include "choquard/functionals.hpp"

using namespace choquard;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

RadialField sampled(const RadialGrid& grid, double (*f)(double)) {
  RadialField u;
  u.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i) u[i] = f(grid.nodes()[i]);
  return u;
}

Params base_params() {
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.5;
  prm.lambda = 0.7;
  prm.q = 2.0;
  prm.p = 1.5;
  return prm;
}

} // namespace

TEST_CASE("dirichlet energy of the linear cone is exact") {
  // u = 1 - r on B(0,1) in R^4: int |grad u|^2 = omega_4 / 4
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  const RadialField u = sampled(grid, [](double r) { return 1.0 - r; });
  CHECK(dirichlet_energy(grid, u) ==
        doctest::Approx(2.0 * kPi * kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("power integral converges to the smooth-profile value") {
  // int_B (1-r^2)^2 over B(0,1) in R^3 = 4 pi (1/3 - 2/5 + 1/7)
  const double exact = 4.0 * kPi * (1.0 / 3.0 - 2.0 / 5.0 + 1.0 / 7.0);
  double prev = 1e300;
  for (int M : {64, 256, 1024, 2048}) {
    RadialGrid grid(GridSpec{1.0, M, 2.0}, 3, 1.0);
    const RadialField u = sampled(grid, [](double r) { return 1.0 - r * r; });
    const double err = std::fabs(power_integral(grid, u, 2.0) - exact);
    CHECK(err < prev);  // second-order interpolation error
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("hardy integral of a constant-like profile") {
  // u = 1 - r in R^4: int u^2/|x|^2 = omega_4 int_0^1 (1-r)^2 r dr = omega_4/12
  // (the interpolant reproduces 1-r exactly except on the flat inner sliver)
  RadialGrid grid(GridSpec{1.0, 256, 2.0}, 4, 2.0);
  const RadialField u = sampled(grid, [](double r) { return 1.0 - r; });
  CHECK(hardy_integral(grid, u) ==
        doctest::Approx(2.0 * kPi * kPi / 12.0).epsilon(1e-4));
}

TEST_CASE("discrete Hardy inequality on random positive fields") {
  RadialGrid grid(GridSpec{1.0, 128, 3.0}, 4, 2.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int t = 0; t < 20; ++t) {
    RadialField u;
    u.v.resize(grid.M());
    for (int i = 0; i < grid.M(); ++i) u[i] = unit(rng);
    // mu_bar = 1 for N = 4
    CHECK(dirichlet_energy(grid, u) - hardy_integral(grid, u) > 0.0);
  }
}

TEST_CASE("hardy matrix matches the hardy integral quadratic form") {
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  const TriDiag h = hardy_matrix(grid);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RadialField u;
  u.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i) u[i] = unit(rng);
  double form = 0.0;
  for (int i = 0; i < grid.M(); ++i) {
    form += h.diag[i] * u[i] * u[i];
    if (i + 1 < grid.M()) form += 2.0 * h.off[i] * u[i] * u[i + 1];
  }
  CHECK(form == doctest::Approx(hardy_integral(grid, u)).epsilon(1e-13));
}

TEST_CASE("gradients match directional finite differences") {
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  const Params prm = base_params();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (ProblemKind kind :
       {ProblemKind::Linear, ProblemKind::Superlinear, ProblemKind::Nonlocal}) {
    RadialField u, d;
    u.v.resize(grid.M());
    d.v.resize(grid.M());
    for (int i = 0; i < grid.M(); ++i) {
      const double r = grid.nodes()[i];
      u[i] = (1.0 - r) * (1.0 + 0.2 * unit(rng));
      d[i] = std::sin(2.0 * kPi * r) + 0.3 * unit(rng);
    }
    const RadialField g = gradient(kind, grid, u, prm);
    double gd = 0.0, dn = 0.0;
    for (int i = 0; i < grid.M(); ++i) {
      gd += g[i] * d[i];
      dn += d[i] * d[i];
    }
    const double h = 1e-6 / std::sqrt(dn);
    RadialField up = u, um = u;
    for (int i = 0; i < grid.M(); ++i) {
      up[i] += h * d[i];
      um[i] -= h * d[i];
    }
    const double fd = (energy(kind, grid, up, prm).total -
                       energy(kind, grid, um, prm).total) /
                      (2.0 * h);
    CHECK(std::fabs(fd - gd) <= 1e-6 * std::max(1.0, std::fabs(gd)));
  }
}

TEST_CASE("energy decomposition is consistent") {
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  const Params prm = base_params();
  const RadialField u = sampled(grid, [](double r) { return 1.0 - r; });
  const EnergyBreakdown b = energy(ProblemKind::Linear, grid, u, prm);
  CHECK(b.hnorm_sq ==
        doctest::Approx(b.dirichlet - prm.mu * b.hardy).epsilon(1e-14));
  CHECK(b.total == doctest::Approx(0.5 * b.hnorm_sq -
                                   0.5 * prm.lambda * b.perturbation -
                                   b.riesz_crit / 6.0)
                       .epsilon(1e-13));
}

TEST_CASE("fiber maximizer has the closed form when lambda = 0") {
  // value(t) = t^2/2 A - t^{2k}/(2k) B peaks at t* = (A/B)^{1/(2k-2)}
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  Params prm = base_params();
  prm.lambda = 0.0;
  const RadialField u = sampled(grid, [](double r) { return 1.0 - r; });
  const FiberMap f = fiber_map(ProblemKind::Linear, grid, u, prm);
  const FiberMax fm = fiber_maximize(f, 1e-12);
  const double k = f.crit_power;
  const double t_star = std::pow(f.hnorm_sq / f.riesz_crit, 1.0 / (k - 2.0));
  CHECK(fm.t == doctest::Approx(t_star).epsilon(1e-8));
  CHECK(fm.value ==
        doctest::Approx(0.5 * t_star * t_star * f.hnorm_sq -
                        std::pow(t_star, k) / k * f.riesz_crit)
            .epsilon(1e-10));
}

TEST_CASE("fiber rejects the zero field") {
  RadialGrid grid(GridSpec{1.0, 64, 2.0}, 4, 2.0);
  Params prm = base_params();
  RadialField zero;
  zero.v.assign(grid.M(), 0.0);
  const FiberMap f = fiber_map(ProblemKind::Linear, grid, zero, prm);
  CHECK_THROWS(fiber_maximize(f));
}
