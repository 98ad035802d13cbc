#pragma once

#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

enum class ConstantName { S, S_mu, S_HA, S_HA_domain };

const char* constant_name(ConstantName name);

struct RefinementEntry {
  int M;
  double R;
  double value;
};

struct ConstantReport {
  ConstantName name;
  double value = 0.0;
  RadialField minimizer;
  double truncation_radius = 0.0;
  std::vector<RefinementEntry> refinement_history;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

struct MinimizeOptions {
  int max_iter = 4000;
  double grad_tol = 1e-8;  ///< relative preconditioned gradient norm
  int restart_every = 50;
};

/// Whole-space Sobolev extremal U(r) = [N(N-2)]^{(N-2)/4} (1+r^2)^{-(N-2)/2},
/// sampled at the grid nodes.
RadialField talenti_profile(const RadialGrid& grid, int N);

/// Initializer with the extremal's two-exponent shape,
/// v(r) = (r^{1-a} + r^{1+a})^{-(N-2)/2}.
RadialField two_exponent_profile(const RadialGrid& grid, const Derived& derived);

/// Rayleigh-quotient value of one named constant at a given field (no descent).
double quotient_value(ConstantName name, const RadialGrid& grid,
                      const Params& params, const RadialField& u);

/// Normalized-constraint minimization of the named quotient: preconditioned
/// projected conjugate gradient with Armijo backtracking, denominator fixed
/// to 1 by rescaling, positivity enforced by |u| each iterate.
/// Throws std::runtime_error when the line search cannot decrease the
/// quotient; reports converged=false (with last iterate) on iteration cap.
ConstantReport minimize_constant(ConstantName name, const RadialGrid& grid,
                                 const Params& params, const RadialField& init,
                                 const MinimizeOptions& opts = {});

/// Extremal profile scaled to the normalization
/// ||u||_mu^2 = D_alpha(u) = S_HA^{(2N-alpha)/(N-alpha+2)}.
struct ExtremalResult {
  RadialField u;
  double s_ha = 0.0;
  double hnorm_sq = 0.0;
  double riesz_crit = 0.0;
  ConstantReport report;
};
ExtremalResult extremal_u_mu(const RadialGrid& grid, const Params& params,
                             const MinimizeOptions& opts = {});

/// Log-log slope fits of a positive radial profile on an inner window
/// (expected -gamma') and an outer window (expected -gamma).
struct DecayWindows {
  double inner_lo = 1e-3, inner_hi = 5e-2;
  double outer_lo = 2e1, outer_hi = 1e2;
};
struct DecayReport {
  double inner_slope = 0.0, outer_slope = 0.0;
  double inner_rms = 0.0, outer_rms = 0.0;  ///< fit residuals in log space
  int inner_points = 0, outer_points = 0;
};
DecayReport verify_decay(const RadialGrid& grid, const RadialField& u_mu,
                         const Derived& derived, const DecayWindows& win = {});

} // namespace choquard
