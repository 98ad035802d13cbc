#include "choquard/params.hpp"

#include <cmath>

#include "choquard/gammafn.hpp"

namespace choquard {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double sphere_area(int n) {
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

double hls_constant(int N, double alpha) {
  const double n = static_cast<double>(N);
  return std::pow(kPi, 0.5 * alpha) * gamma_fn(0.5 * (n - alpha)) /
         gamma_fn(0.5 * (2.0 * n - alpha)) *
         std::pow(gamma_fn(0.5 * n) / gamma_fn(n), alpha / n - 1.0);
}

std::vector<std::string> validate(const Params& params) {
  std::vector<std::string> warnings;
  if (params.N < 3)
    throw ValidationError("DimensionOutOfRange", "N must be an integer >= 3, got " +
                                                     std::to_string(params.N));
  const double n = static_cast<double>(params.N);
  const double alpha_max = n - std::max(n - 4.0, 0.0);
  if (!(params.alpha > 0.0 && params.alpha < alpha_max))
    throw ValidationError("AlphaOutOfRange",
                          "alpha must satisfy 0 < alpha < N - (N-4)_+ = " +
                              std::to_string(alpha_max));
  const double mu_bar = 0.25 * (n - 2.0) * (n - 2.0);
  if (!(params.mu < mu_bar))
    throw ValidationError("MuAboveCritical",
                          "mu must be < (N-2)^2/4 = " + std::to_string(mu_bar));
  if (params.mu <= 0.0)
    warnings.push_back(
        "mu <= 0: allowed for constant estimates, rejected by solver runs");
  if (params.lambda < 0.0)
    throw ValidationError("LambdaNegative", "lambda must be >= 0");
  const double two_star = 2.0 * n / (n - 2.0);
  const double two_star_alpha = (2.0 * n - params.alpha) / (n - 2.0);
  if (params.q && !(*params.q > 1.0 && *params.q < two_star - 1.0))
    throw ValidationError("QOutOfRange", "q must satisfy 1 < q < 2* - 1 = " +
                                             std::to_string(two_star - 1.0));
  if (params.p && !(*params.p > 1.0 && *params.p < two_star_alpha - 1.0))
    throw ValidationError("POutOfRange",
                          "p must satisfy 1 < p < 2*_alpha - 1 = " +
                              std::to_string(two_star_alpha - 1.0));
  if (!(params.R > 0.0))
    throw ValidationError("RadiusNonPositive", "R must be > 0");
  return warnings;
}

Derived derive(const Params& params) {
  validate(params);
  const double n = static_cast<double>(params.N);
  Derived d;
  d.N = params.N;
  d.alpha = params.alpha;
  d.mu = params.mu;
  d.mu_bar = 0.25 * (n - 2.0) * (n - 2.0);
  d.a = std::sqrt(1.0 - params.mu / d.mu_bar);
  const double root = std::sqrt(d.mu_bar - params.mu);
  d.gamma = std::sqrt(d.mu_bar) + root;
  d.gamma_prime = std::sqrt(d.mu_bar) - root;
  d.two_star = 2.0 * n / (n - 2.0);
  d.two_star_alpha = (2.0 * n - params.alpha) / (n - 2.0);
  d.two_lower_alpha = (2.0 * n - params.alpha) / n;
  d.hls_constant = hls_constant(params.N, params.alpha);
  return d;
}

double critical_level(double s_ha, const Derived& derived) {
  if (!(s_ha > 0.0)) throw std::domain_error("critical_level: S must be > 0");
  const double n = static_cast<double>(derived.N);
  const double expo = (2.0 * n - derived.alpha) / (n + 2.0 - derived.alpha);
  return (n + 2.0 - derived.alpha) / (2.0 * (2.0 * n - derived.alpha)) *
         std::pow(s_ha, expo);
}

} // namespace choquard
