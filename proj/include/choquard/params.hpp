#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace choquard {

/// Validation failure with a stable machine-readable code
/// (e.g. "AlphaOutOfRange", "MuAboveCritical").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Physical parameters of the problem family.
struct Params {
  int N = 3;                ///< spatial dimension, N >= 3
  double alpha = 1.0;       ///< Riesz kernel exponent, 0 < alpha < N - (N-4)_+
  double mu = 0.0;          ///< Hardy coefficient, mu < (N-2)^2/4
  double lambda = 0.0;      ///< perturbation weight, >= 0
  std::optional<double> q;  ///< local superlinear power, 1 < q < 2* - 1
  std::optional<double> p;  ///< nonlocal power, 1 < p < 2*_alpha - 1
  double R = 1.0;           ///< domain / truncation radius
};

/// Closed-form derived quantities.
struct Derived {
  int N;
  double alpha;
  double mu;
  double mu_bar;           ///< (N-2)^2/4
  double a;                ///< sqrt(1 - mu/mu_bar)
  double gamma;            ///< sqrt(mu_bar) + sqrt(mu_bar - mu)
  double gamma_prime;      ///< sqrt(mu_bar) - sqrt(mu_bar - mu)
  double two_star;         ///< 2N/(N-2)
  double two_star_alpha;   ///< (2N-alpha)/(N-2)
  double two_lower_alpha;  ///< (2N-alpha)/N
  double hls_constant;     ///< sharp constant C(N,alpha)
};

/// Hard constraint check. Returns warnings for the regimes the solver rejects
/// but the estimates still allow (mu <= 0); throws ValidationError otherwise.
std::vector<std::string> validate(const Params& params);

/// Validate and populate all derived quantities.
Derived derive(const Params& params);

/// Sharp HLS constant C(N, alpha) from the Gamma-function formula.
double hls_constant(int N, double alpha);

/// Compactness threshold c* = (N+2-alpha)/(2(2N-alpha)) * S^((2N-alpha)/(N+2-alpha)).
/// Throws std::domain_error for s_ha <= 0.
double critical_level(double s_ha, const Derived& derived);

/// Unit-sphere surface area of S^{n-1} in R^n.
double sphere_area(int n);

} // namespace choquard
