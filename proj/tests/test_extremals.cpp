#include <doctest.h>

#include <cmath>

#include "choquard/extremals.hpp"

using namespace choquard;

namespace {

Params space_params(int N, double alpha, double mu) {
  Params prm;
  prm.N = N;
  prm.alpha = alpha;
  prm.mu = mu;
  prm.R = 1e3;
  return prm;
}

RadialGrid space_grid(int N, double alpha, int M = 256) {
  return RadialGrid(GridSpec{1e3, M, 3.0}, N, alpha, "cache");
}

// closed-form best constant of the unweighted quotient in R^N
double closed_form_s(int N) {
  auto gamma_fn = [](double x) { return std::tgamma(x); };
  const double pi = 3.141592653589793238462643383279502884;
  return pi * N * (N - 2) *
         std::pow(gamma_fn(0.5 * N) / gamma_fn(double(N)), 2.0 / N);
}

} // namespace

TEST_CASE("talenti profile nearly attains the closed-form constant") {
  const RadialGrid grid = space_grid(3, 1.0);
  const Params prm = space_params(3, 1.0, 0.0);
  // shift by the trace at r = R: the quotient imposes a Dirichlet edge, and a
  // nonzero boundary value would pick up O(M) artificial gradient energy there
  RadialField u = talenti_profile(grid, 3);
  const double trace =
      std::pow(3.0, 0.25) / std::sqrt(1.0 + prm.R * prm.R);
  for (auto& x : u.v) x -= trace;
  const double q = quotient_value(ConstantName::S, grid, prm, u);
  const double s3 = 5.47790408953133187;  // frozen: pi 3 (Gamma(3/2)/Gamma(3))^{2/3}
  CHECK(closed_form_s(3) == doctest::Approx(s3).epsilon(1e-12));
  CHECK(q >= s3 * (1.0 - 1e-3));  // quotient never dips below the infimum
  CHECK(q <= s3 * 1.02);          // and the sampled extremal is nearly sharp
}

TEST_CASE("minimizing from a mismatched start recovers the constant") {
  const RadialGrid grid = space_grid(3, 1.0);
  const Params prm = space_params(3, 1.0, 0.0);
  RadialField init;
  init.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i)
    init[i] = std::exp(-grid.nodes()[i]);  // wrong decay on purpose
  const ConstantReport rep =
      minimize_constant(ConstantName::S, grid, prm, init);
  CHECK(rep.value == doctest::Approx(5.47790408953133187).epsilon(5e-3));
  CHECK(rep.grad_norm >= 0.0);
}

TEST_CASE("extremal normalization ties the norm to the constant") {
  const RadialGrid grid = space_grid(4, 2.0);
  const Params prm = space_params(4, 2.0, 0.5);
  const ExtremalResult ex = extremal_u_mu(grid, prm);
  const Derived d = derive(prm);
  // ||u||_mu^2 = D(u) = S^{(2N-alpha)/(N-alpha+2)}
  const double target =
      std::pow(ex.s_ha, (2.0 * 4 - 2.0) / (4 - 2.0 + 2.0));
  CHECK(ex.hnorm_sq == doctest::Approx(target).epsilon(1e-8));
  CHECK(ex.riesz_crit == doctest::Approx(target).epsilon(1e-8));
  CHECK(ex.s_ha ==
        doctest::Approx(ex.hnorm_sq /
                        std::pow(ex.riesz_crit, 1.0 / d.two_star_alpha))
            .epsilon(1e-8));
}

TEST_CASE("decay slope fit recovers exact power laws") {
  const RadialGrid grid = space_grid(4, 2.0, 192);
  const Params prm = space_params(4, 2.0, 0.5);
  const Derived d = derive(prm);
  RadialField u;
  u.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    // exact two-exponent profile: r^{-gamma'} inside, r^{-gamma} outside
    u[i] = 1.0 / (std::pow(r, d.gamma_prime) + std::pow(r, d.gamma));
  }
  const DecayReport rep = verify_decay(grid, u, d);
  CHECK(rep.inner_slope == doctest::Approx(-d.gamma_prime).epsilon(0.02));
  CHECK(rep.outer_slope == doctest::Approx(-d.gamma).epsilon(0.02));
  CHECK(rep.inner_points >= 4);
  CHECK(rep.outer_points >= 4);
}
