#include "choquard/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace choquard {

namespace {

void check_sizes(const RadialGrid& grid, const RadialField& u) {
  if (int(u.size()) != grid.M())
    throw std::invalid_argument("field/grid size mismatch");
}

// 4-point Gauss-Legendre on [-1, 1]
constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

// One quadrature point of the interpolant: u(r) = (1-t) u_left + t u_right,
// u_right = 0 when right == M; contribution owned by cell `cell`.
struct QuadPoint {
  int cell;
  int left;
  int right;
  double t;
  double W;  // omega r^{N-1} dr weight
};

std::vector<QuadPoint> quad_plan(const RadialGrid& grid, double npow) {
  const int m = grid.M();
  const auto& r = grid.nodes();
  const double omega = sphere_area(grid.N());
  std::vector<QuadPoint> plan;
  plan.reserve(std::size_t(8 * m + 8));
  auto piece = [&](double lo, double hi, int cell, int left, int right,
                   double t_lo, double t_hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int g = 0; g < 4; ++g) {
      const double rr = mid + half * kGx[g];
      const double frac = (hi > lo) ? (rr - lo) / (hi - lo) : 0.0;
      plan.push_back({cell, left, right, t_lo + frac * (t_hi - t_lo),
                      omega * std::pow(rr, npow) * half * kGw[g]});
    }
  };
  piece(0.0, r[0], 0, 0, 0, 0.0, 0.0);  // flat inner extension
  for (int i = 0; i + 1 < m; ++i) {
    const double mid = 0.5 * (r[i] + r[i + 1]);
    piece(r[i], mid, i, i, i + 1, 0.0, 0.5);
    piece(mid, r[i + 1], i + 1, i, i + 1, 0.5, 1.0);
  }
  piece(r[m - 1], grid.R(), m - 1, m - 1, m, 0.0, 1.0);  // u(R) = 0
  return plan;
}

inline double point_value(const QuadPoint& qp, const RadialField& u, int m) {
  const double ur = (qp.right < m) ? u[qp.right] : 0.0;
  return (1.0 - qp.t) * u[qp.left] + qp.t * ur;
}

} // namespace

double power_integral(const RadialGrid& grid, const RadialField& u, double p) {
  check_sizes(grid, u);
  const int m = grid.M();
  double acc = 0.0;
  for (const QuadPoint& qp : quad_plan(grid, double(grid.N() - 1)))
    acc += qp.W * std::pow(std::fabs(point_value(qp, u, m)), p);
  return acc;
}

std::vector<double> power_masses(const RadialGrid& grid, const RadialField& u,
                                 double p) {
  check_sizes(grid, u);
  const int m = grid.M();
  std::vector<double> q(m, 0.0);
  for (const QuadPoint& qp : quad_plan(grid, double(grid.N() - 1)))
    q[qp.cell] += qp.W * std::pow(std::fabs(point_value(qp, u, m)), p);
  return q;
}

void add_power_mass_gradient(const RadialGrid& grid, const RadialField& u,
                             double p, const std::vector<double>& A,
                             double coeff, RadialField& g) {
  check_sizes(grid, u);
  const int m = grid.M();
  for (const QuadPoint& qp : quad_plan(grid, double(grid.N() - 1))) {
    const double v = point_value(qp, u, m);
    if (v == 0.0) continue;
    const double f = coeff * A[qp.cell] * qp.W * p *
                     std::pow(std::fabs(v), p - 2.0) * v;
    g[qp.left] += f * (1.0 - qp.t);
    if (qp.right < m) g[qp.right] += f * qp.t;
  }
}

double hardy_integral(const RadialGrid& grid, const RadialField& u) {
  check_sizes(grid, u);
  const int m = grid.M();
  double acc = 0.0;
  for (const QuadPoint& qp : quad_plan(grid, double(grid.N() - 3))) {
    const double v = point_value(qp, u, m);
    acc += qp.W * v * v;
  }
  return acc;
}

void add_hardy_gradient(const RadialGrid& grid, const RadialField& u,
                        double coeff, RadialField& g) {
  check_sizes(grid, u);
  const int m = grid.M();
  for (const QuadPoint& qp : quad_plan(grid, double(grid.N() - 3))) {
    const double f = 2.0 * coeff * qp.W * point_value(qp, u, m);
    g[qp.left] += f * (1.0 - qp.t);
    if (qp.right < m) g[qp.right] += f * qp.t;
  }
}

TriDiag p1_matrix(const RadialGrid& grid, double npow) {
  const int m = grid.M();
  TriDiag t;
  t.diag.assign(m, 0.0);
  t.off.assign(m > 0 ? m - 1 : 0, 0.0);
  for (const QuadPoint& qp : quad_plan(grid, npow)) {
    const double a = 1.0 - qp.t, b = qp.t;
    t.diag[qp.left] += qp.W * a * a;
    if (qp.right < m) {
      t.diag[qp.right] += qp.W * b * b;
      if (qp.right == qp.left + 1) t.off[qp.left] += qp.W * a * b;
    }
  }
  return t;
}

TriDiag hardy_matrix(const RadialGrid& grid) {
  return p1_matrix(grid, double(grid.N() - 3));
}

TriDiag mass_matrix(const RadialGrid& grid) {
  return p1_matrix(grid, double(grid.N() - 1));
}

namespace {

double perturbation_integral(ProblemKind kind, const RadialGrid& grid,
                             const RadialField& u, const Params& params) {
  switch (kind) {
    case ProblemKind::Linear:
      return power_integral(grid, u, 2.0);
    case ProblemKind::Superlinear:
      if (!params.q)
        throw ValidationError("MissingQ", "superlinear problem needs q");
      return power_integral(grid, u, *params.q + 1.0);
    case ProblemKind::Nonlocal:
      if (!params.p)
        throw ValidationError("MissingP", "nonlocal problem needs p");
      return grid.kernel_quadratic(power_masses(grid, u, *params.p));
  }
  throw std::logic_error("unreachable");
}

} // namespace

const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Linear: return "linear";
    case ProblemKind::Superlinear: return "superlinear";
    case ProblemKind::Nonlocal: return "nonlocal";
  }
  return "?";
}

std::vector<double> stiffness_coeffs(const RadialGrid& grid) {
  const int m = grid.M();
  const auto& r = grid.nodes();
  const double omega = sphere_area(grid.N());
  std::vector<double> c(m);
  // c_i = omega int_seg r^{N-1} dr / h^2, so the Dirichlet sum is exact for
  // the interpolant; a midpoint coefficient undershoots badly on wide cells
  const double n = double(grid.N());
  for (int i = 0; i < m; ++i) {
    const double right = (i + 1 < m) ? r[i + 1] : grid.R();
    const double h = right - r[i];
    c[i] = omega * (std::pow(right, n) - std::pow(r[i], n)) / (n * h * h);
  }
  return c;
}

double dirichlet_energy(const RadialGrid& grid, const RadialField& u) {
  check_sizes(grid, u);
  const std::vector<double> c = stiffness_coeffs(grid);
  const int m = grid.M();
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double right = (i + 1 < m) ? u[i + 1] : 0.0;
    const double d = right - u[i];
    acc += c[i] * d * d;
  }
  return acc;
}

EnergyBreakdown norms(const RadialGrid& grid, const RadialField& u,
                      const Params& params) {
  check_sizes(grid, u);
  EnergyBreakdown b;
  b.dirichlet = dirichlet_energy(grid, u);
  b.hardy = hardy_integral(grid, u);
  b.hnorm_sq = b.dirichlet - params.mu * b.hardy;
  const Derived d = derive(params);
  b.riesz_crit = grid.kernel_quadratic(power_masses(grid, u, d.two_star_alpha));
  return b;
}

EnergyBreakdown energy(ProblemKind kind, const RadialGrid& grid,
                       const RadialField& u, const Params& params) {
  EnergyBreakdown b = norms(grid, u, params);
  const Derived d = derive(params);
  b.perturbation = perturbation_integral(kind, grid, u, params);
  double pref = 0.0;
  switch (kind) {
    case ProblemKind::Linear: pref = 0.5 * params.lambda; break;
    case ProblemKind::Superlinear: pref = params.lambda / (*params.q + 1.0); break;
    case ProblemKind::Nonlocal: pref = params.lambda / (2.0 * *params.p); break;
  }
  b.total = 0.5 * b.hnorm_sq - pref * b.perturbation -
            b.riesz_crit / (2.0 * d.two_star_alpha);
  return b;
}

RadialField gradient(ProblemKind kind, const RadialGrid& grid,
                     const RadialField& u, const Params& params) {
  check_sizes(grid, u);
  const Derived d = derive(params);
  const int m = grid.M();
  const std::vector<double> c = stiffness_coeffs(grid);
  const std::vector<double> ones(m, 1.0);

  RadialField g;
  g.v.assign(m, 0.0);
  // 1/2 d(dirichlet)/du_i - mu/2 d(hardy)/du_i
  for (int i = 0; i < m; ++i) {
    const double left = (i > 0) ? c[i - 1] * (u[i] - u[i - 1]) : 0.0;
    const double right = c[i] * (u[i] - ((i + 1 < m) ? u[i + 1] : 0.0));
    g[i] = left + right;
  }
  if (params.mu != 0.0) add_hardy_gradient(grid, u, -0.5 * params.mu, g);

  // critical Choquard term: d[-D/(2 2*_a)]/du with D = q K q
  {
    const std::vector<double> phi =
        grid.kernel_apply_mass(power_masses(grid, u, d.two_star_alpha));
    add_power_mass_gradient(grid, u, d.two_star_alpha, phi,
                            -1.0 / d.two_star_alpha, g);
  }

  switch (kind) {
    case ProblemKind::Linear:
      add_power_mass_gradient(grid, u, 2.0, ones, -0.5 * params.lambda, g);
      break;
    case ProblemKind::Superlinear: {
      if (!params.q)
        throw ValidationError("MissingQ", "superlinear problem needs q");
      add_power_mass_gradient(grid, u, *params.q + 1.0, ones,
                              -params.lambda / (*params.q + 1.0), g);
      break;
    }
    case ProblemKind::Nonlocal: {
      if (!params.p)
        throw ValidationError("MissingP", "nonlocal problem needs p");
      const std::vector<double> psi =
          grid.kernel_apply_mass(power_masses(grid, u, *params.p));
      add_power_mass_gradient(grid, u, *params.p, psi,
                              -params.lambda / *params.p, g);
      break;
    }
  }
  return g;
}

double FiberMap::value(double t) const {
  return 0.5 * t * t * hnorm_sq -
         pert_prefactor * std::pow(t, pert_power) * perturbation -
         std::pow(t, crit_power) / crit_power * riesz_crit;
}

double FiberMap::derivative(double t) const {
  return t * hnorm_sq -
         pert_prefactor * pert_power * std::pow(t, pert_power - 1.0) * perturbation -
         std::pow(t, crit_power - 1.0) * riesz_crit;
}

FiberMap fiber_map(ProblemKind kind, const RadialGrid& grid,
                   const RadialField& u, const Params& params) {
  const Derived d = derive(params);
  const EnergyBreakdown b = energy(kind, grid, u, params);
  FiberMap f;
  f.kind = kind;
  f.hnorm_sq = b.hnorm_sq;
  f.riesz_crit = b.riesz_crit;
  f.perturbation = b.perturbation;
  f.lambda = params.lambda;
  f.two_star_alpha = d.two_star_alpha;
  f.crit_power = 2.0 * d.two_star_alpha;
  switch (kind) {
    case ProblemKind::Linear:
      f.pert_power = 2.0;
      f.pert_prefactor = 0.5 * params.lambda;
      break;
    case ProblemKind::Superlinear:
      f.pert_power = *params.q + 1.0;
      f.pert_prefactor = params.lambda / (*params.q + 1.0);
      break;
    case ProblemKind::Nonlocal:
      f.pert_power = 2.0 * *params.p;
      f.pert_prefactor = params.lambda / (2.0 * *params.p);
      break;
  }
  return f;
}

FiberMax fiber_maximize(const FiberMap& fiber, double tol) {
  if (!(fiber.hnorm_sq > 0.0) || !(fiber.riesz_crit > 0.0))
    throw std::runtime_error("fiber_maximize: degenerate fiber (u ~ 0)");
  // homogeneity bound: the map is negative beyond the root of t^2/2 A = t^2k/2k B
  const double k = fiber.crit_power;
  double hi = std::pow(k * fiber.hnorm_sq / fiber.riesz_crit, 1.0 / (k - 2.0));
  double lo = 1e-6 * hi;
  // the derivative is t (A - monotone increasing), so the map is unimodal;
  // expand until the derivative is negative at hi
  int guard = 0;
  while (fiber.derivative(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("fiber_maximize: bracket failure");
  }
  while (fiber.derivative(lo) < 0.0) {
    lo *= 0.5;
    if (++guard > 400) throw std::runtime_error("fiber_maximize: bracket failure");
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo);
  double e = lo + gr * (hi - lo);
  double fc = fiber.value(c), fe = fiber.value(e);
  while (hi - lo > tol * (1.0 + hi)) {
    if (fc > fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - gr * (hi - lo);
      fc = fiber.value(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + gr * (hi - lo);
      fe = fiber.value(e);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, fiber.value(t)};
}

} // namespace choquard
