#include <doctest.h>

#include <cmath>

#include "choquard/gammafn.hpp"
#include "choquard/params.hpp"

using namespace choquard;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("gamma function closed forms") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(gamma_fn(3.5) ==
        doctest::Approx(15.0 / 8.0 * std::sqrt(kPi)).epsilon(1e-13));
  CHECK(gamma_fn(10.0) == doctest::Approx(362880.0).epsilon(1e-12));
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("derived quantities at the reference point") {
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.5;
  const Derived d = derive(prm);
  CHECK(d.mu_bar == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.a == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(d.two_star == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(d.two_star_alpha == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(d.two_lower_alpha == doctest::Approx(1.5).epsilon(1e-15));
  // algebraic identities
  CHECK(d.gamma * d.gamma_prime == doctest::Approx(prm.mu).epsilon(1e-14));
  CHECK(d.gamma + d.gamma_prime ==
        doctest::Approx(2.0 * std::sqrt(d.mu_bar)).epsilon(1e-14));
}

TEST_CASE("sharp Riesz-pairing constants from the Gamma formula") {
  // frozen independently with 50-digit arithmetic
  CHECK(hls_constant(3, 1.0) ==
        doctest::Approx(2.294010703541599).epsilon(1e-12));
  CHECK(hls_constant(3, 2.0) ==
        doctest::Approx(7.30387211937510916).epsilon(1e-12));
  CHECK(hls_constant(4, 1.0) ==
        doctest::Approx(1.81199546500932835).epsilon(1e-12));
  CHECK(hls_constant(4, 2.0) ==
        doctest::Approx(3.84764949048559229).epsilon(1e-12));
  CHECK(hls_constant(5, 2.0) ==
        doctest::Approx(2.63322875022327716).epsilon(1e-12));
  CHECK(hls_constant(5, 3.0) ==
        doctest::Approx(5.33063096116557445).epsilon(1e-12));
}

TEST_CASE("constant continuity in alpha") {
  for (const auto& [N, alpha] : {std::pair{3, 1.0}, {4, 2.0}, {5, 2.5}}) {
    double prev = 1e300;
    for (double h : {1e-2, 1e-4, 1e-6}) {
      const double diff = std::fabs(hls_constant(N, alpha + h) -
                                    hls_constant(N, alpha));
      CHECK(diff < prev);
      prev = diff;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("validation rejects out-of-range parameters") {
  Params prm;
  prm.N = 2;
  CHECK_THROWS_AS(validate(prm), ValidationError);
  prm.N = 4;
  prm.alpha = 4.5;
  CHECK_THROWS_AS(validate(prm), ValidationError);
  prm.alpha = -1.0;
  CHECK_THROWS_AS(validate(prm), ValidationError);
  prm.alpha = 2.0;
  prm.mu = 1.5;  // above mu_bar = 1
  CHECK_THROWS_AS(validate(prm), ValidationError);
  prm.mu = 0.5;
  prm.lambda = -1.0;
  CHECK_THROWS_AS(validate(prm), ValidationError);
  prm.lambda = 0.0;
  CHECK_NOTHROW(validate(prm));
}

TEST_CASE("negative mu is allowed with a warning") {
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = -1.0;
  const auto warnings = validate(prm);
  CHECK(!warnings.empty());
}

TEST_CASE("compactness threshold formula") {
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.5;
  const Derived d = derive(prm);
  const double s = 3.7;
  // (N+2-alpha)/(2(2N-alpha)) * s^{(2N-alpha)/(N+2-alpha)}
  CHECK(critical_level(s, d) ==
        doctest::Approx(4.0 / 12.0 * std::pow(s, 6.0 / 4.0)).epsilon(1e-14));
  CHECK_THROWS(critical_level(-1.0, d));
}
