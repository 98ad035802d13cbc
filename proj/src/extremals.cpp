#include "choquard/extremals.hpp"

#include <cmath>
#include <stdexcept>

namespace choquard {

namespace {

// One named quotient Num(u)/G(u)^theta with G the raw (homogeneous)
// normalization integral of degree `g_degree`.
struct Quotient {
  ConstantName name;
  const RadialGrid& grid;
  const Params& params;
  Derived derived;
  double mu;        // 0 for S, params.mu otherwise
  double theta;     // denominator exponent
  double g_degree;  // homogeneity degree of G

  explicit Quotient(ConstantName nm, const RadialGrid& g, const Params& p)
      : name(nm), grid(g), params(p), derived(derive(p)) {
    mu = (nm == ConstantName::S) ? 0.0 : p.mu;
    if (nm == ConstantName::S || nm == ConstantName::S_mu) {
      theta = 2.0 / derived.two_star;
      g_degree = derived.two_star;
    } else {
      theta = 1.0 / derived.two_star_alpha;
      g_degree = 2.0 * derived.two_star_alpha;
    }
  }

  bool riesz_denominator() const {
    return name == ConstantName::S_HA || name == ConstantName::S_HA_domain;
  }

  double num(const RadialField& u) const {
    double val = dirichlet_energy(grid, u);
    if (mu != 0.0) val -= mu * hardy_integral(grid, u);
    return val;
  }

  std::vector<double> grad_num(const RadialField& u) const {
    const int m = grid.M();
    const std::vector<double> c = stiffness_coeffs(grid);
    RadialField g;
    g.v.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double left = (i > 0) ? c[i - 1] * (u[i] - u[i - 1]) : 0.0;
      const double right = c[i] * (u[i] - ((i + 1 < m) ? u[i + 1] : 0.0));
      g[i] = 2.0 * (left + right);
    }
    if (mu != 0.0) add_hardy_gradient(grid, u, -mu, g);
    return std::move(g.v);
  }

  double g_raw(const RadialField& u) const {
    if (riesz_denominator())
      return grid.kernel_quadratic(
          power_masses(grid, u, derived.two_star_alpha));
    return power_integral(grid, u, derived.two_star);
  }

  std::vector<double> grad_g(const RadialField& u) const {
    const int m = grid.M();
    RadialField g;
    g.v.assign(m, 0.0);
    if (riesz_denominator()) {
      const std::vector<double> phi = grid.kernel_apply_mass(
          power_masses(grid, u, derived.two_star_alpha));
      add_power_mass_gradient(grid, u, derived.two_star_alpha, phi, 2.0, g);
    } else {
      const std::vector<double> ones(m, 1.0);
      add_power_mass_gradient(grid, u, derived.two_star, ones, 1.0, g);
    }
    return std::move(g.v);
  }

  double value(const RadialField& u) const {
    return num(u) / std::pow(g_raw(u), theta);
  }

  // rescale in place so that g_raw = 1
  void normalize(RadialField& u) const {
    const double g = g_raw(u);
    if (!(g > 0.0)) throw std::runtime_error("quotient: zero denominator");
    const double s = std::pow(g, -1.0 / g_degree);
    for (auto& x : u.v) x *= s;
  }
};

// preconditioner: plain radial stiffness solve (Sobolev gradient)
struct StiffnessSolver {
  std::vector<double> c;
  int m;
  explicit StiffnessSolver(const RadialGrid& grid)
      : c(stiffness_coeffs(grid)), m(grid.M()) {}
  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> diag(m), low(m - 1), rhs = b, x(m);
    for (int i = 0; i < m; ++i) diag[i] = ((i > 0) ? c[i - 1] : 0.0) + c[i];
    for (int i = 0; i + 1 < m; ++i) low[i] = -c[i];
    for (int i = 1; i < m; ++i) {
      const double f = low[i - 1] / diag[i - 1];
      diag[i] -= f * low[i - 1];
      rhs[i] -= f * rhs[i - 1];
    }
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = (rhs[i] - low[i] * x[i + 1]) / diag[i];
    return x;
  }
};

} // namespace

const char* constant_name(ConstantName name) {
  switch (name) {
    case ConstantName::S: return "S";
    case ConstantName::S_mu: return "S_mu";
    case ConstantName::S_HA: return "S_HA";
    case ConstantName::S_HA_domain: return "S_HA_domain";
  }
  return "?";
}

RadialField talenti_profile(const RadialGrid& grid, int N) {
  if (N < 3) throw ValidationError("DimensionOutOfRange", "N must be >= 3");
  const double c = std::pow(double(N) * (N - 2.0), 0.25 * (N - 2.0));
  RadialField u;
  u.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    u.v[i] = c * std::pow(1.0 + r * r, -0.5 * (N - 2.0));
  }
  return u;
}

RadialField two_exponent_profile(const RadialGrid& grid, const Derived& d) {
  RadialField u;
  u.v.resize(grid.M());
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    u.v[i] = std::pow(std::pow(r, 1.0 - d.a) + std::pow(r, 1.0 + d.a),
                      -0.5 * (d.N - 2.0));
  }
  return u;
}

double quotient_value(ConstantName name, const RadialGrid& grid,
                      const Params& params, const RadialField& u) {
  return Quotient(name, grid, params).value(u);
}

ConstantReport minimize_constant(ConstantName name, const RadialGrid& grid,
                                 const Params& params, const RadialField& init,
                                 const MinimizeOptions& opts) {
  const Quotient quot(name, grid, params);
  const StiffnessSolver prec(grid);
  const int m = grid.M();

  RadialField u = init;
  double sup = 0.0;
  for (double x : u.v) sup = std::max(sup, std::fabs(x));
  if (!(sup > 0.0)) throw ValidationError("ZeroInitializer", "init must be nonzero");
  for (auto& x : u.v) x = std::fabs(x);
  quot.normalize(u);

  double q_val = quot.value(u);
  std::vector<double> dir(m, 0.0), g_prev, h_prev;
  double grad_norm = 0.0;
  int it = 0;
  bool converged = false;

  for (; it < opts.max_iter; ++it) {
    // projected gradient at G = 1: grad Num - theta Num grad G
    const std::vector<double> gn = quot.grad_num(u);
    const std::vector<double> gg = quot.grad_g(u);
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = gn[i] - quot.theta * q_val * gg[i];
    const std::vector<double> h = prec.solve(g);
    double gh = 0.0;
    for (int i = 0; i < m; ++i) gh += g[i] * h[i];
    grad_norm = std::sqrt(std::max(0.0, gh));
    if (grad_norm <= opts.grad_tol * std::max(1.0, std::fabs(q_val))) {
      converged = true;
      break;
    }

    // Polak-Ribiere direction with periodic restart
    double beta = 0.0;
    if (it % opts.restart_every != 0 && !g_prev.empty()) {
      double num_b = 0.0, den_b = 0.0;
      for (int i = 0; i < m; ++i) {
        num_b += (g[i] - g_prev[i]) * h[i];
        den_b += g_prev[i] * h_prev[i];
      }
      if (den_b > 0.0) beta = std::max(0.0, num_b / den_b);
    }
    double slope = 0.0;
    for (int i = 0; i < m; ++i) {
      dir[i] = -h[i] + beta * dir[i];
      slope += g[i] * dir[i];
    }
    if (slope >= 0.0) {  // not a descent direction: steepest restart
      slope = 0.0;
      for (int i = 0; i < m; ++i) {
        dir[i] = -h[i];
        slope -= g[i] * h[i];
      }
    }

    // Armijo backtracking on the raw quotient (scale invariant)
    double step = 1.0;
    bool accepted = false;
    RadialField trial;
    trial.v.resize(m);
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < m; ++i) trial.v[i] = std::fabs(u[i] + step * dir[i]);
      double g_trial = quot.g_raw(trial);
      if (g_trial > 0.0) {
        const double q_trial = quot.num(trial) / std::pow(g_trial, quot.theta);
        if (q_trial <= q_val + 1e-4 * step * slope) {
          u = trial;
          quot.normalize(u);
          q_val = quot.value(u);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error(std::string("minimize_constant(") +
                               constant_name(name) +
                               "): line search failed to decrease the quotient");
    g_prev = g;
    h_prev = h;
  }

  ConstantReport rep;
  rep.name = name;
  rep.value = q_val;
  rep.minimizer = u;
  rep.truncation_radius = grid.R();
  rep.iterations = it;
  rep.grad_norm = grad_norm;
  rep.converged = converged;
  rep.refinement_history.push_back({grid.M(), grid.R(), q_val});
  return rep;
}

ExtremalResult extremal_u_mu(const RadialGrid& grid, const Params& params,
                             const MinimizeOptions& opts) {
  const Derived d = derive(params);
  if (!(params.mu > 0.0))
    throw ValidationError("MuOutOfRange", "extremal_u_mu needs 0 < mu < mu_bar");
  const RadialField init = two_exponent_profile(grid, d);
  ConstantReport rep = minimize_constant(ConstantName::S_HA, grid, params, init, opts);

  // at the minimizer D = 1 and ||u||_mu^2 = S_HA; rescale so that both equal
  // S_HA^{(2N-alpha)/(N-alpha+2)}
  const double k = 2.0 * d.two_star_alpha;
  const double s = std::pow(rep.value, 1.0 / (k - 2.0));
  ExtremalResult res;
  res.u = rep.minimizer;
  for (auto& x : res.u.v) x *= s;
  res.s_ha = rep.value;
  const EnergyBreakdown b = norms(grid, res.u, params);
  res.hnorm_sq = b.hnorm_sq;
  res.riesz_crit = b.riesz_crit;
  res.report = std::move(rep);
  return res;
}

namespace {
struct SlopeFit {
  double slope, rms;
  int n;
};
SlopeFit fit_log_slope(const RadialGrid& grid, const RadialField& u, double lo,
                       double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    if (r < lo || r > hi) continue;
    if (!(u[i] > 0.0))
      throw std::runtime_error("verify_decay: nonpositive value in window");
    const double x = std::log(r), y = std::log(u[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4) throw std::runtime_error("verify_decay: window has < 4 nodes");
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double icpt = (sy - slope * sx) / n;
  double rss = 0.0;
  for (int i = 0; i < grid.M(); ++i) {
    const double r = grid.nodes()[i];
    if (r < lo || r > hi) continue;
    const double e = std::log(u[i]) - (icpt + slope * std::log(r));
    rss += e * e;
  }
  return {slope, std::sqrt(rss / n), n};
}
} // namespace

DecayReport verify_decay(const RadialGrid& grid, const RadialField& u_mu,
                         const Derived& derived, const DecayWindows& win) {
  (void)derived;  // expected slopes -gamma', -gamma live with the caller
  DecayReport rep;
  const SlopeFit in = fit_log_slope(grid, u_mu, win.inner_lo, win.inner_hi);
  const SlopeFit out = fit_log_slope(grid, u_mu, win.outer_lo, win.outer_hi);
  rep.inner_slope = in.slope;
  rep.inner_rms = in.rms;
  rep.inner_points = in.n;
  rep.outer_slope = out.slope;
  rep.outer_rms = out.rms;
  rep.outer_points = out.n;
  return rep;
}

} // namespace choquard
