#include "choquard/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "choquard/spectral.hpp"

namespace choquard {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Thomas solve for a symmetric tridiagonal system (diag d, offdiag e).
void tridiag_solve(std::vector<double> d, const std::vector<double>& e,
                   std::vector<double> b, std::vector<double>& x) {
  const int n = int(d.size());
  for (int i = 1; i < n; ++i) {
    double piv = d[i - 1];
    if (std::fabs(piv) < 1e-300) piv = (piv >= 0 ? 1e-300 : -1e-300);
    const double m = e[i - 1] / piv;
    d[i] -= m * e[i - 1];
    b[i] -= m * b[i - 1];
  }
  x.resize(n);
  double piv = d[n - 1];
  if (std::fabs(piv) < 1e-300) piv = (piv >= 0 ? 1e-300 : -1e-300);
  x[n - 1] = b[n - 1] / piv;
  for (int i = n - 2; i >= 0; --i) {
    piv = d[i];
    if (std::fabs(piv) < 1e-300) piv = (piv >= 0 ? 1e-300 : -1e-300);
    x[i] = (b[i] - e[i] * x[i + 1]) / piv;
  }
}

/// The quadratic part of the energy as a tridiagonal matrix; SPD for
/// 0 <= mu < mu_bar, so A^{-1} g is both a Riesz representative of the
/// gradient and a natural preconditioner.
struct HmuMatrix {
  std::vector<double> diag, off;

  // Full quadratic part of the energy: stiffness - mu hardy - lambda mass.
  // lambda_mass is the linear-problem coefficient (0 otherwise); SPD as long
  // as lambda < lambda_1.
  HmuMatrix(const RadialGrid& grid, double mu, double lambda_mass) {
    const int m = grid.M();
    const std::vector<double> c = stiffness_coeffs(grid);
    const TriDiag h = hardy_matrix(grid);
    const TriDiag b = mass_matrix(grid);
    diag.resize(m);
    off.resize(m - 1);
    for (int i = 0; i < m; ++i) {
      const double prev = (i > 0) ? c[i - 1] : 0.0;
      diag[i] = prev + c[i] - mu * h.diag[i] - lambda_mass * b.diag[i];
    }
    for (int i = 0; i + 1 < m; ++i)
      off[i] = -c[i] - mu * h.off[i] - lambda_mass * b.off[i];
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x;
    tridiag_solve(diag, off, b, x);
    return x;
  }
};

RadialField scaled(const RadialField& u, double t) {
  RadialField out = u;
  for (auto& x : out.v) x *= t;
  return out;
}

/// max_t E(t u) together with the maximizer; the value of the restricted
/// (Nehari) energy at the ray of u.
double fiber_value(ProblemKind kind, const RadialGrid& grid,
                   const RadialField& u, const Params& params, double* t_out) {
  const FiberMax fm = fiber_maximize(fiber_map(kind, grid, u, params));
  if (t_out) *t_out = fm.t;
  return fm.value;
}

void check_hypotheses(ProblemKind kind, const RadialGrid& grid,
                      const Params& params, const Derived& d) {
  switch (kind) {
    case ProblemKind::Linear: {
      const double l1 = lambda1(grid, params);
      if (!(params.lambda > 0.0) || params.lambda >= l1)
        throw ValidationError("LambdaOutOfRange",
                              "linear problem needs 0 < lambda < lambda_1");
      break;
    }
    case ProblemKind::Superlinear: {
      if (!params.q) throw ValidationError("MissingQ", "superlinear problem needs q");
      if (!(*params.q > 1.0) || !(*params.q < d.two_star - 1.0))
        throw ValidationError("QOutOfRange", "need 1 < q < 2* - 1");
      if (!(params.lambda > 0.0))
        throw ValidationError("LambdaOutOfRange", "need lambda > 0");
      break;
    }
    case ProblemKind::Nonlocal: {
      if (!params.p) throw ValidationError("MissingP", "nonlocal problem needs p");
      if (!(*params.p > 1.0) || !(*params.p < d.two_star_alpha - 1.0))
        throw ValidationError("POutOfRange", "need 1 < p < 2*_alpha - 1");
      if (!(params.lambda > 0.0))
        throw ValidationError("LambdaOutOfRange", "need lambda > 0");
      break;
    }
  }
}

} // namespace

SolveReport solve(ProblemKind problem, const RadialGrid& grid,
                  const Params& params, const RadialField& seed, double s_ha,
                  const SolveOptions& opts) {
  const Derived d = derive(params);
  check_hypotheses(problem, grid, params, d);

  SolveReport report;
  report.problem = problem;
  report.params = params;
  report.c_star = critical_level(s_ha, d);

  // Stage 1: place the seed at its fiber maximum.
  double t0 = 0.0;
  double level = fiber_value(problem, grid, seed, params, &t0);
  RadialField u = scaled(seed, t0);

  // Mountain-pass geometry witnesses along the seed ray.
  {
    const FiberMap fiber = fiber_map(problem, grid, seed, params);
    const double hn = std::sqrt(fiber.hnorm_sq);
    report.mp_rho = 0.5 * t0 * hn;
    if (!(fiber.value(0.5 * t0) > 0.0))
      throw SolveFailure("NoMountainPassGeometry",
                         "no positive-energy sphere along the seed ray");
    double t_far = 2.0 * t0;
    while (fiber.value(t_far) >= 0.0 && t_far < 1e12) t_far *= 2.0;
    if (fiber.value(t_far) >= 0.0)
      throw SolveFailure("NoMountainPassGeometry",
                         "ray energy never becomes negative");
    report.mp_t_far = t_far * hn;
  }

  // Stage 2: descent on the fiber-restricted energy. The iterate stays
  // fiber-maximized; the step direction is -grad E at the iterate, which is
  // a descent direction for the restricted energy (envelope argument).
  const double collapse_tol = 1e-10 * std::sqrt(norms(grid, seed, params).hnorm_sq);
  // Plain H_mu preconditioner for all problems: folding the lambda-mass
  // term into A shrinks its low eigenvalues and amplifies A^{-1} C', which
  // destabilizes the fixed-point map instead of helping it.
  const HmuMatrix amat(grid, params.mu, 0.0);
  RadialField g = gradient(problem, grid, u, params);
  // Preconditioned direction d = A^{-1} g; the residual is the dual norm
  // sqrt(g . d) of the gradient, which is mesh-independent (unlike any
  // pointwise norm, whose scale blows up with the tiny cell weights at the
  // origin).
  std::vector<double> dir = amat.solve(g.v);
  double res = std::sqrt(std::max(0.0, dot(g.v, dir)));
  double step = 1.0;
  std::vector<double> u_prev, d_prev;
  int it = 0;
  int stall = 0;
  double best_res = res;

  auto collapsed = [&](const RadialField& v) {
    double s = 0.0;
    for (double x : v.v) s += x * x;
    return std::sqrt(s) < collapse_tol;
  };

  const double tol = opts.residual_tol;
  // Stages 2 and 3 are alternated: descent on the fiber-restricted energy
  // moves through the landscape, the accelerated fixed-point iteration
  // polishes; each escapes the other's plateaus.
  auto stage2 = [&]() {
  u_prev.clear();
  d_prev.clear();
  stall = 0;
  best_res = res;
  for (; it < opts.max_iter && res > tol * (1.0 + std::fabs(level)); ++it) {
    if (!u_prev.empty()) {
      std::vector<double> du(u.size()), dd(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        du[i] = u[i] - u_prev[i];
        dd[i] = dir[i] - d_prev[i];
      }
      const double ddd = dot(dd, dd);
      if (ddd > 0.0) step = std::clamp(dot(du, dd) / ddd, 1e-12, 1e8);
    }
    u_prev = u.v;
    d_prev = dir;

    const double g2 = dot(g.v, dir);  // dual norm squared of the gradient
    double s = step;
    double new_level = level;
    RadialField trial;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      trial = u;
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] -= s * dir[i];
      if (collapsed(trial)) { s *= 0.5; continue; }
      double tt = 0.0;
      const double lv = fiber_value(problem, grid, trial, params, &tt);
      if (lv <= level - 1e-4 * s * g2) {
        for (auto& x : trial.v) x *= tt;
        new_level = lv;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // restricted energy cannot decrease further
    u = trial;
    level = new_level;
    g = gradient(problem, grid, u, params);
    dir = amat.solve(g.v);
    res = std::sqrt(std::max(0.0, dot(g.v, dir)));
    if (res < 0.9 * best_res) { best_res = res; stall = 0; } else if (++stall > 2000) break;
  }
  };

  // Stage 3: Anderson-accelerated fixed-point iteration on the
  // fiber-rescaled Newton map Phi(u) = t*(u - A^{-1} g(u)). The rescaling
  // removes the unstable amplitude mode of the mountain-pass point, and the
  // Anderson mixing absorbs the slow near-unit modes that make the plain
  // map stall at a small but nonzero residual.
  auto stage3 = [&]() {
    const std::size_t window = 5;
    std::vector<std::vector<double>> hist_u, hist_f;
    RadialField best_u = u, best_g = g;
    std::vector<double> best_d = dir;
    double best = res;
    int bad = 0;

    auto evaluate = [&](RadialField& v, RadialField& gv,
                        std::vector<double>& dv) {
      double tt = 1.0;
      fiber_value(problem, grid, v, params, &tt);
      for (auto& x : v.v) x *= tt;
      gv = gradient(problem, grid, v, params);
      dv = amat.solve(gv.v);
      return std::sqrt(std::max(0.0, dot(gv.v, dv)));
    };

    for (; it < opts.max_iter && res > tol * (1.0 + std::fabs(level)); ++it) {
      std::vector<double> f(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) f[i] = -dir[i];
      hist_u.push_back(u.v);
      hist_f.push_back(f);
      if (hist_u.size() > window) {
        hist_u.erase(hist_u.begin());
        hist_f.erase(hist_f.begin());
      }

      // Mixing weights theta (sum 1) minimizing || sum theta_j f_j ||_2,
      // via the difference parametrization against the newest residual.
      const int n = int(hist_f.size());
      std::vector<double> theta(n, 0.0);
      theta[n - 1] = 1.0;
      if (n > 1) {
        const int k = n - 1;
        std::vector<std::vector<double>> mat(k, std::vector<double>(k + 1));
        const auto& fl = hist_f[k];
        for (int a = 0; a < k; ++a) {
          std::vector<double> da(fl.size());
          for (std::size_t i = 0; i < fl.size(); ++i)
            da[i] = hist_f[a][i] - fl[i];
          for (int b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < fl.size(); ++i)
              s += da[i] * (hist_f[b][i] - fl[i]);
            mat[a][b] = mat[b][a] = s;
          }
          mat[a][k] = -dot(da, fl);
        }
        for (int a = 0; a < k; ++a) mat[a][a] *= 1.0 + 1e-10;
        // Gaussian elimination with partial pivoting on the k x k system
        bool ok = true;
        for (int col = 0; col < k && ok; ++col) {
          int piv = col;
          for (int rr = col + 1; rr < k; ++rr)
            if (std::fabs(mat[rr][col]) > std::fabs(mat[piv][col])) piv = rr;
          std::swap(mat[piv], mat[col]);
          if (std::fabs(mat[col][col]) < 1e-300) { ok = false; break; }
          for (int rr = col + 1; rr < k; ++rr) {
            const double mfac = mat[rr][col] / mat[col][col];
            for (int cc = col; cc <= k; ++cc) mat[rr][cc] -= mfac * mat[col][cc];
          }
        }
        if (ok) {
          std::vector<double> cvec(k);
          for (int rr = k - 1; rr >= 0; --rr) {
            double s = mat[rr][k];
            for (int cc = rr + 1; cc < k; ++cc) s -= mat[rr][cc] * cvec[cc];
            cvec[rr] = s / mat[rr][rr];
          }
          double csum = 0.0;
          for (int a = 0; a < k; ++a) {
            theta[a] = cvec[a];
            csum += cvec[a];
          }
          theta[k] = 1.0 - csum;
        }
      }

      RadialField trial;
      trial.v.assign(u.size(), 0.0);
      for (int j = 0; j < n; ++j)
        for (std::size_t i = 0; i < u.size(); ++i)
          trial[i] += theta[j] * (hist_u[j][i] + hist_f[j][i]);

      RadialField gt;
      std::vector<double> dt;
      double rt = evaluate(trial, gt, dt);
      if (!std::isfinite(rt) || rt > 2.0 * best) {
        // restart from the best iterate with a damped plain step
        hist_u.clear();
        hist_f.clear();
        const double damp = 1.0 / double(1 << std::min(bad, 8));
        trial = best_u;
        for (std::size_t i = 0; i < u.size(); ++i)
          trial[i] = best_u[i] - damp * best_d[i];
        rt = evaluate(trial, gt, dt);
        if (!std::isfinite(rt)) break;
      }
      u = trial;
      g = gt;
      dir = dt;
      res = rt;
      if (res < best) {
        best = res;
        best_u = u;
        best_g = g;
        best_d = dir;
        bad = 0;
      } else if (++bad > 400) {
        break;
      }
    }
    u = best_u;
    g = best_g;
    dir = best_d;
    res = best;
    level = energy(problem, grid, u, params).total;
  };

  for (int round = 0;
       round < 20 && it < opts.max_iter && res > tol * (1.0 + std::fabs(level));
       ++round) {
    stage2();
    stage3();
  }

  if (collapsed(u))
    throw SolveFailure("TrivialAttractor",
                       "iterate collapsed to zero; restart from a bubble seed");
  level = energy(problem, grid, u, params).total;
  if (res > tol * (1.0 + std::fabs(level)))
    throw SolveFailure("NonConvergence",
                       "residual plateau at " + std::to_string(res) + " after " +
                           std::to_string(it) + " iterations");

  report.solution = u;
  report.level_c = level;
  report.residual = res;
  report.below_threshold = level < report.c_star;
  report.iterations = it;
  const FiberMap fiber = fiber_map(problem, grid, u, params);
  report.path_history.reserve(opts.path_samples);
  for (int k = 0; k < opts.path_samples; ++k)
    report.path_history.push_back(
        fiber.value(2.0 * double(k) / double(opts.path_samples - 1)));
  return report;
}

double verify_weak_form(const RadialGrid& grid, const RadialField& u,
                        ProblemKind problem, const Params& params,
                        int trial_count, unsigned rng_seed) {
  std::mt19937 rng(rng_seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const RadialField g = gradient(problem, grid, u, params);
  const auto& r = grid.nodes();
  const double pi = 3.14159265358979323846;
  double worst = 0.0;
  for (int t = 0; t < trial_count; ++t) {
    double c[5];
    for (double& x : c) x = coef(rng);
    RadialField phi;
    phi.v.resize(grid.M());
    for (int i = 0; i < grid.M(); ++i) {
      double s = 0.0;
      for (int k = 0; k < 5; ++k)
        s += c[k] * std::sin((k + 1) * pi * r[i] / grid.R());
      phi[i] = s;
    }
    const double nrm = std::sqrt(norms(grid, phi, params).hnorm_sq);
    if (!(nrm > 0.0)) continue;
    double pair = 0.0;
    for (int i = 0; i < grid.M(); ++i) pair += g[i] * phi[i];
    worst = std::max(worst, std::fabs(pair) / nrm);
  }
  return worst;
}

} // namespace choquard
