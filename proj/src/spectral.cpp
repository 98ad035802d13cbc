#include "choquard/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "choquard/functionals.hpp"

namespace choquard {

namespace {

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

} // namespace

std::vector<EigenResult> eigenpairs(const RadialGrid& grid, const Params& params,
                                    int count) {
  const Derived d = derive(params);
  if (params.mu < 0.0)
    throw ValidationError("MuOutOfRange", "spectral runs need 0 <= mu < mu_bar");
  if (params.mu >= d.mu_bar)
    throw ValidationError("MuAboveCritical",
                          "operator unbounded below for mu >= mu_bar");
  const int m = grid.M();
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  const std::vector<double> c = stiffness_coeffs(grid);
  const TriDiag h = hardy_matrix(grid);

  std::vector<double> diag(m), off(m - 1);
  for (int i = 0; i < m; ++i) {
    const double prev = (i > 0) ? c[i - 1] : 0.0;
    diag[i] = prev + c[i] - params.mu * h.diag[i];
  }
  for (int i = 0; i + 1 < m; ++i) off[i] = -c[i] - params.mu * h.off[i];

  auto apply_a = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < m; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += off[i - 1] * x[i - 1];
      if (i + 1 < m) y[i] += off[i] * x[i + 1];
    }
  };
  auto b_dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += w[i] * x[i] * y[i];
    return acc;
  };

  std::vector<EigenResult> results;
  std::vector<std::vector<double>> basis;  // converged eigenvectors

  for (int k = 0; k < count; ++k) {
    // deterministic start: k-th Dirichlet sine mode
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i)
      x[i] = std::sin((k + 1) * 3.141592653589793 * r[i] / grid.R());
    auto deflate = [&](std::vector<double>& v) {
      for (const auto& b : basis) {
        const double proj = b_dot(v, b);
        for (int i = 0; i < m; ++i) v[i] -= proj * b[i];
      }
    };
    deflate(x);
    double nrm = std::sqrt(b_dot(x, x));
    for (int i = 0; i < m; ++i) x[i] /= nrm;

    double lambda = 0.0, sigma = 0.0, res = 1e300;
    std::vector<double> ax(m), rhs(m), y;
    int it = 0;
    const int max_it = 500;
    for (; it < max_it; ++it) {
      // solve (A - sigma B) y = B x
      std::vector<double> ds(m);
      for (int i = 0; i < m; ++i) {
        ds[i] = diag[i] - sigma * w[i];
        rhs[i] = w[i] * x[i];
      }
      tridiag_solve(ds, off, rhs, y);
      deflate(y);
      nrm = std::sqrt(b_dot(y, y));
      if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::runtime_error("eigenpairs: inverse iteration broke down");
      for (int i = 0; i < m; ++i) x[i] = y[i] / nrm;
      apply_a(x, ax);
      lambda = 0.0;
      for (int i = 0; i < m; ++i) lambda += x[i] * ax[i];
      // residual in the B^{-1} norm with ||x||_B = 1
      res = 0.0;
      for (int i = 0; i < m; ++i) {
        const double t = ax[i] - lambda * w[i] * x[i];
        res += t * t / w[i];
      }
      res = std::sqrt(res);
      if (res <= 1e-8 * std::max(1.0, std::fabs(lambda))) break;
      if (res < 1e-2 * std::max(1.0, std::fabs(lambda)))
        sigma = lambda;  // Rayleigh shift once safely locked on
    }
    if (res > 1e-8 * std::max(1.0, std::fabs(lambda)))
      throw std::runtime_error("eigenpairs: no convergence in 500 iterations");

    // sign fix: largest-magnitude entry positive
    int imax = 0;
    for (int i = 1; i < m; ++i)
      if (std::fabs(x[i]) > std::fabs(x[imax])) imax = i;
    if (x[imax] < 0.0)
      for (int i = 0; i < m; ++i) x[i] = -x[i];

    EigenResult er;
    er.k = k + 1;
    er.lambda_k = lambda;
    er.eigenfield.v = x;
    er.residual = res;
    er.iterations = it + 1;
    results.push_back(er);
    basis.push_back(std::move(x));
  }
  return results;
}

double lambda1(const RadialGrid& grid, const Params& params) {
  return eigenpairs(grid, params, 1)[0].lambda_k;
}

} // namespace choquard
