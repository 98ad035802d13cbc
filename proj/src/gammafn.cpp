#include "choquard/gammafn.hpp"

#include <cmath>

namespace choquard {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's tabulation).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279502884;

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

} // namespace

double gamma_fn(double x) {
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  }
  return lanczos_gamma(x);
}

double log_gamma(double x) {
  if (x < 0.5) return std::log(std::fabs(gamma_fn(x)));
  const double z = x - 1.0;
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

} // namespace choquard
