#pragma once

#include <cmath>
#include <utility>

#include "choquard/extremals.hpp"
#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// Cut-off: 1 on [0, delta], quintic transition on [delta, 2 delta]
/// (matched first derivatives), 0 beyond. Needs 4 delta < R.
struct CutoffSpec {
  double delta = 0.125;
};

double cutoff_eta(const CutoffSpec& spec, double r);
double cutoff_eta_prime(const CutoffSpec& spec, double r);

/// Positive radial profile tabulated on one grid and evaluated anywhere by
/// monotone cubic interpolation in (log r, log u). Below the first node the
/// profile is extended by the local power law; beyond the last node
/// evaluation throws (the extremal table must be built wide enough).
class RadialProfileTable {
 public:
  RadialProfileTable(const std::vector<double>& r, const std::vector<double>& u);
  double operator()(double r) const;
  double r_max() const { return x_.empty() ? 0.0 : std::exp(x_.back()); }

 private:
  std::vector<double> x_, y_, d_;  // log r, log u, dy/dx
};

/// Nodal eta(r) * eps^{(2-N)/2} u_mu(r/eps) on the target grid.
RadialField build_bubble(const RadialGrid& grid, const RadialProfileTable& u_mu,
                         double epsilon, const CutoffSpec& cutoff);

/// One epsilon sample of every energy-level ingredient.
struct ScanRow {
  double epsilon = 0.0;
  double hnorm_sq = 0.0;           ///< ||u_eps||_mu^2
  double riesz_crit = 0.0;         ///< critical Riesz double integral
  double l2 = 0.0;                 ///< int u_eps^2
  double lq1 = 0.0;                ///< int |u_eps|^{q+1} (0 when q unset)
  double riesz_p = 0.0;            ///< p-power Riesz double integral (0 when p unset)
  double a_term = 0.0;             ///< int |grad eta|^2 u_{mu,eps}^2
  double t_fiber = 0.0;            ///< fiber maximizer t_eps
  double max_fiber_energy = 0.0;   ///< max_t E(t u_eps)
  double c_star_gap = 0.0;         ///< c* - max_fiber_energy
};

/// Column access by CSV header name; throws on unknown name.
double scan_column(const ScanRow& row, const std::string& name);

std::vector<double> log_spaced(double lo, double hi, int n);

/// Scans the bubble family over eps_list (>= 8 log-spaced points).
/// s_ha fixes the threshold c*.
std::vector<ScanRow> scan(ProblemKind kind, const RadialGrid& grid,
                          const RadialProfileTable& u_mu,
                          const std::vector<double>& eps_list,
                          const Params& params, const CutoffSpec& cutoff,
                          double s_ha);

/// Least-squares slope of log|value - reference| against log eps.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double reference);
RateFit fit_rate(const std::vector<ScanRow>& rows, const std::string& column,
                 double reference);

/// Smallest lambda with positive threshold gap at the given eps, located by
/// bisection on [1e-3, 1e6] (the gap is monotone increasing in lambda).
double find_lambda0(ProblemKind kind, const RadialGrid& grid,
                    const RadialProfileTable& u_mu, const Params& params,
                    const CutoffSpec& cutoff, double s_ha, double epsilon);

} // namespace choquard
