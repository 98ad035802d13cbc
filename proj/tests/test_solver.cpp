#include <doctest.h>

#include <cmath>

#include "choquard/extremals.hpp"
#include "choquard/solver.hpp"
#include "choquard/spectral.hpp"

using namespace choquard;

namespace {

struct Fixture {
  RadialGrid ball{GridSpec{1.0, 96, 2.0}, 4, 2.0, "cache"};
  Params prm;
  double s_ha;
  RadialField seed;

  Fixture() {
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.5;
    // modest whole-space run: only the threshold value and seed shape matter
    RadialGrid space(GridSpec{1e3, 192, 3.0}, 4, 2.0, "cache");
    Params sp = prm;
    sp.R = 1e3;
    const ExtremalResult ex = extremal_u_mu(space, sp);
    s_ha = ex.s_ha;
    seed.v.resize(ball.M());
    for (int i = 0; i < ball.M(); ++i) {
      const double r = ball.nodes()[i];
      // bubble-shaped seed, scale 0.05
      seed[i] = std::pow(0.05, -1.0) /
                (std::pow(r / 0.05, 0.29) + std::pow(r / 0.05, 1.71)) *
                std::max(0.0, 1.0 - r / 0.5);
    }
  }
};

} // namespace

TEST_CASE("linear solve reaches a positive level below the threshold") {
  Fixture fx;
  fx.prm.lambda = 0.5 * lambda1(fx.ball, fx.prm);
  const SolveReport rep =
      solve(ProblemKind::Linear, fx.ball, fx.prm, fx.seed, fx.s_ha);
  CHECK(rep.residual <= 1e-6 * (1.0 + std::fabs(rep.level_c)));
  CHECK(rep.level_c > 0.0);
  CHECK(rep.level_c < rep.c_star);
  CHECK(rep.below_threshold);
  CHECK(rep.mp_t_far > rep.mp_rho);
  // weak form holds against random test fields, and a random field fails it
  const double defect = verify_weak_form(fx.ball, rep.solution,
                                         ProblemKind::Linear, fx.prm, 20, 5);
  CHECK(defect <= 1e-5);
  RadialField junk;
  junk.v.resize(fx.ball.M());
  for (int i = 0; i < fx.ball.M(); ++i)
    junk[i] = std::sin(7.0 * fx.ball.nodes()[i]) + 0.5;
  CHECK(verify_weak_form(fx.ball, junk, ProblemKind::Linear, fx.prm, 20, 5) >
        1e-2);
}

TEST_CASE("solver rejects hypothesis violations") {
  Fixture fx;
  fx.prm.lambda = 2.0 * lambda1(fx.ball, fx.prm);  // beyond lambda_1
  CHECK_THROWS_AS(
      solve(ProblemKind::Linear, fx.ball, fx.prm, fx.seed, fx.s_ha),
      ValidationError);
  fx.prm.lambda = 1.0;
  fx.prm.q = 3.5;  // q must stay below 2* - 1 = 3
  CHECK_THROWS_AS(
      solve(ProblemKind::Superlinear, fx.ball, fx.prm, fx.seed, fx.s_ha),
      ValidationError);
  fx.prm.q.reset();
  fx.prm.p = 2.5;  // p must stay below 2*_alpha - 1 = 2
  CHECK_THROWS_AS(
      solve(ProblemKind::Nonlocal, fx.ball, fx.prm, fx.seed, fx.s_ha),
      ValidationError);
}

TEST_CASE("superlinear solve from the same seed") {
  Fixture fx;
  fx.prm.lambda = 1.0;
  fx.prm.q = 2.0;
  const SolveReport rep =
      solve(ProblemKind::Superlinear, fx.ball, fx.prm, fx.seed, fx.s_ha);
  CHECK(rep.residual <= 1e-6 * (1.0 + std::fabs(rep.level_c)));
  CHECK(rep.level_c > 0.0);
  CHECK(verify_weak_form(fx.ball, rep.solution, ProblemKind::Superlinear,
                         fx.prm, 20, 5) <= 1e-5);
}
