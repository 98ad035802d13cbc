#include "choquard/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace choquard {

double cutoff_eta(const CutoffSpec& spec, double r) {
  if (r <= spec.delta) return 1.0;
  if (r >= 2.0 * spec.delta) return 0.0;
  const double s = (r - spec.delta) / spec.delta;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double cutoff_eta_prime(const CutoffSpec& spec, double r) {
  if (r <= spec.delta || r >= 2.0 * spec.delta) return 0.0;
  const double s = (r - spec.delta) / spec.delta;
  const double t = s * (1.0 - s);
  return -30.0 * t * t / spec.delta;
}

RadialProfileTable::RadialProfileTable(const std::vector<double>& r,
                                       const std::vector<double>& u) {
  if (r.size() != u.size() || r.size() < 4)
    throw std::invalid_argument("profile table needs >= 4 samples");
  x_.reserve(r.size());
  y_.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(u[i] > 0.0))
      throw std::invalid_argument("profile table needs positive r and u");
    x_.push_back(std::log(r[i]));
    y_.push_back(std::log(u[i]));
  }
  // Fritsch-Carlson monotone cubic slopes
  const std::size_t n = x_.size();
  std::vector<double> h(n - 1), sl(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    sl[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  d_[0] = sl[0];
  d_[n - 1] = sl[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (sl[i - 1] * sl[i] <= 0.0)
      d_[i] = 0.0;
    else
      d_[i] = 2.0 * sl[i - 1] * sl[i] / (sl[i - 1] + sl[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (sl[i] == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    const double a = d_[i] / sl[i], b = d_[i + 1] / sl[i];
    const double s2 = a * a + b * b;
    if (s2 > 9.0) {
      const double t = 3.0 / std::sqrt(s2);
      d_[i] = t * a * sl[i];
      d_[i + 1] = t * b * sl[i];
    }
  }
}

double RadialProfileTable::operator()(double r) const {
  if (!(r > 0.0)) throw std::domain_error("profile table: r must be > 0");
  const double x = std::log(r);
  if (x < x_.front()) {
    // power-law extension with the innermost slope
    return std::exp(y_.front() + d_.front() * (x - x_.front()));
  }
  if (x > x_.back())
    throw std::runtime_error(
        "profile table: r beyond table range; build the extremal on a wider "
        "truncation radius");
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = std::min(x_.size() - 2, std::size_t(it - x_.begin()) - 1);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return std::exp(h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] +
                  h11 * h * d_[i + 1]);
}

RadialField build_bubble(const RadialGrid& grid, const RadialProfileTable& u_mu,
                         double epsilon, const CutoffSpec& cutoff) {
  if (!(epsilon > 0.0)) throw std::domain_error("build_bubble: epsilon must be > 0");
  if (4.0 * cutoff.delta >= grid.R())
    throw ValidationError("CutoffTooWide", "need 4 delta < R");
  if (2.0 * cutoff.delta / epsilon > u_mu.r_max())
    throw std::runtime_error(
        "build_bubble: epsilon too small for the extremal table range");
  const double scale = std::pow(epsilon, 0.5 * (2.0 - grid.N()));
  RadialField out;
  out.v.assign(grid.M(), 0.0);
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    if (r >= 2.0 * cutoff.delta) break;  // nodes increasing; support ends here
    out.v[i] = cutoff_eta(cutoff, r) * scale * u_mu(r / epsilon);
  }
  return out;
}

double scan_column(const ScanRow& row, const std::string& name) {
  if (name == "epsilon") return row.epsilon;
  if (name == "hnorm_sq") return row.hnorm_sq;
  if (name == "riesz_crit") return row.riesz_crit;
  if (name == "l2") return row.l2;
  if (name == "lq1") return row.lq1;
  if (name == "riesz_p") return row.riesz_p;
  if (name == "a_term") return row.a_term;
  if (name == "t_fiber") return row.t_fiber;
  if (name == "max_fiber_energy") return row.max_fiber_energy;
  if (name == "c_star_gap") return row.c_star_gap;
  throw std::invalid_argument("unknown scan column: " + name);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_spaced: need 0 < lo < hi, n >= 2");
  std::vector<double> out(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  return out;
}

std::vector<ScanRow> scan(ProblemKind kind, const RadialGrid& grid,
                          const RadialProfileTable& u_mu,
                          const std::vector<double>& eps_list,
                          const Params& params, const CutoffSpec& cutoff,
                          double s_ha) {
  if (eps_list.size() < 8)
    throw std::invalid_argument("scan: need >= 8 epsilon samples");
  const Derived d = derive(params);
  const double c_star = critical_level(s_ha, d);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();

  std::vector<ScanRow> rows;
  rows.reserve(eps_list.size());
  for (const double eps : eps_list) {
    const RadialField u = build_bubble(grid, u_mu, eps, cutoff);
    ScanRow row;
    row.epsilon = eps;
    const EnergyBreakdown b = norms(grid, u, params);
    row.hnorm_sq = b.hnorm_sq;
    row.riesz_crit = b.riesz_crit;
    row.l2 = power_integral(grid, u, 2.0);
    if (params.q) row.lq1 = power_integral(grid, u, *params.q + 1.0);
    if (params.p)
      row.riesz_p = grid.kernel_quadratic(power_masses(grid, u, *params.p));
    // A term uses the uncut scaled extremal against |eta'|^2
    const double scale = std::pow(eps, 0.5 * (2.0 - grid.N()));
    double a_acc = 0.0;
    for (int i = 0; i < grid.M(); ++i) {
      const double ep = cutoff_eta_prime(cutoff, r[i]);
      if (ep == 0.0) continue;
      const double ue = scale * u_mu(r[i] / eps);
      a_acc += w[i] * ep * ep * ue * ue;
    }
    row.a_term = a_acc;

    const FiberMap fiber = fiber_map(kind, grid, u, params);
    const FiberMax fm = fiber_maximize(fiber);
    row.t_fiber = fm.t;
    row.max_fiber_energy = fm.value;
    row.c_star_gap = c_star - fm.value;
    rows.push_back(row);
  }
  return rows;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double reference) {
  if (points.size() < 6)
    throw std::invalid_argument("fit_rate: need >= 6 points");
  const double sign0 = points.front().second - reference;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const int n = int(points.size());
  for (const auto& [eps, val] : points) {
    const double dev = val - reference;
    if (dev * sign0 <= 0.0)
      throw std::runtime_error(
          "fit_rate: deviation changes sign across the scan window");
    const double x = std::log(eps), y = std::log(std::fabs(dev));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double det = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  const double mean_y = sy / n;
  double tss = 0.0;
  fit.residuals.reserve(points.size());
  for (const auto& [eps, val] : points) {
    const double y = std::log(std::fabs(val - reference));
    const double e = y - (fit.intercept + fit.slope * std::log(eps));
    fit.residuals.push_back(e);
    rss += e * e;
    tss += (y - mean_y) * (y - mean_y);
  }
  fit.r2 = (tss > 0.0) ? 1.0 - rss / tss : 1.0;
  return fit;
}

RateFit fit_rate(const std::vector<ScanRow>& rows, const std::string& column,
                 double reference) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(rows.size());
  for (const auto& row : rows)
    pts.emplace_back(row.epsilon, scan_column(row, column));
  return fit_rate(pts, reference);
}

double find_lambda0(ProblemKind kind, const RadialGrid& grid,
                    const RadialProfileTable& u_mu, const Params& params,
                    const CutoffSpec& cutoff, double s_ha, double epsilon) {
  const Derived d = derive(params);
  const double c_star = critical_level(s_ha, d);
  const RadialField u = build_bubble(grid, u_mu, epsilon, cutoff);
  FiberMap fiber = fiber_map(kind, grid, u, params);
  const double pref_unit = 1.0 / fiber.pert_power;  // prefactor at lambda = 1

  auto gap = [&](double lambda) {
    FiberMap f = fiber;
    f.lambda = lambda;
    f.pert_prefactor = pref_unit * lambda;
    return c_star - fiber_maximize(f).value;
  };

  double lo = 1e-3, hi = 1e6;
  if (gap(lo) > 0.0) return lo;
  if (gap(hi) <= 0.0)
    throw std::runtime_error("find_lambda0: no positive gap up to lambda = 1e6");
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (gap(mid) > 0.0 ? hi : lo) = mid;
    if (hi / lo < 1.0 + 1e-10) break;
  }
  return hi;
}

} // namespace choquard
