#pragma once

namespace choquard {

/// Gamma function, Lanczos approximation (g = 7, 9 terms).
/// Relative accuracy is better than 1e-13 on (0, 2N] for the N used here;
/// negative non-integer arguments go through the reflection formula.
double gamma_fn(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

} // namespace choquard
