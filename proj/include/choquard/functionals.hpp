#pragma once

#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

/// The three perturbed problems.
enum class ProblemKind { Linear, Superlinear, Nonlocal };

const char* problem_name(ProblemKind kind);

/// Itemized integrals entering the energies. `perturbation` is the raw
/// integral (no lambda prefactor): int u^2, int |u|^{q+1}, or the p-power
/// Riesz double integral, depending on the problem.
struct EnergyBreakdown {
  double dirichlet = 0.0;     ///< int |grad u|^2
  double hardy = 0.0;         ///< int u^2/|x|^2
  double hnorm_sq = 0.0;      ///< dirichlet - mu * hardy
  double riesz_crit = 0.0;    ///< double Riesz integral at power 2*_alpha
  double perturbation = 0.0;  ///< problem-specific integral, 0 in norms()
  double total = 0.0;         ///< energy value, 0 in norms()
};

/// Piecewise-linear stiffness coefficients: c_i couples u_i to u_{i+1}
/// (u_M = 0 at r = R), dirichlet = sum c_i (u_{i+1} - u_i)^2.
std::vector<double> stiffness_coeffs(const RadialGrid& grid);

double dirichlet_energy(const RadialGrid& grid, const RadialField& u);

/// Nonlinear integrals are evaluated on the piecewise-linear interpolant
/// (flat on (0, r_1), linear to 0 on (r_M, R)) by per-segment Gauss
/// quadrature. Node-lumped rules are unsafe here: on strongly graded meshes
/// they let single-node spikes undercut the critical quotients.

/// int_B |u|^p of the interpolant.
double power_integral(const RadialGrid& grid, const RadialField& u, double p);

/// Per-cell masses q_i = int_{cell_i} |u|^p; the Riesz double integral of
/// |u|^p against itself is grid.kernel_quadratic(q).
std::vector<double> power_masses(const RadialGrid& grid, const RadialField& u,
                                 double p);

/// g += coeff * d/du [ sum_i A_i q_i(u) ] with q the masses above.
/// Pass A_i = 1 for plain integrals, A = K q for Riesz terms.
void add_power_mass_gradient(const RadialGrid& grid, const RadialField& u,
                             double p, const std::vector<double>& A,
                             double coeff, RadialField& g);

/// int_B u^2 / |x|^2 of the interpolant (same Gauss rule, measure r^{N-3}).
/// Mixing this with the interpolant Dirichlet energy keeps the Hardy-
/// corrected norm exact on the discrete space, so singular profiles cannot
/// fake a negative norm.
double hardy_integral(const RadialGrid& grid, const RadialField& u);

/// g += coeff * d/du [ hardy_integral(u) ].
void add_hardy_gradient(const RadialGrid& grid, const RadialField& u,
                        double coeff, RadialField& g);

/// Tridiagonal Galerkin matrix of the Hardy form int phi_i phi_j / |x|^2.
struct TriDiag {
  std::vector<double> diag;
  std::vector<double> off;
};
TriDiag hardy_matrix(const RadialGrid& grid);

/// Consistent P1 mass matrix (quadratic form of int u^2).
TriDiag mass_matrix(const RadialGrid& grid);

/// Dirichlet, Hardy and critical-Riesz integrals of u (no perturbation).
EnergyBreakdown norms(const RadialGrid& grid, const RadialField& u,
                      const Params& params);

/// Full energy of one of the three functionals:
/// total = 1/2 ||u||_mu^2 - pref * perturbation - riesz_crit/(2 * 2*_alpha)
/// with pref = lambda/2, lambda/(q+1) or lambda/(2p).
EnergyBreakdown energy(ProblemKind kind, const RadialGrid& grid,
                       const RadialField& u, const Params& params);

/// Discrete first variation: g_i = d(total)/d u_i.
RadialField gradient(ProblemKind kind, const RadialGrid& grid,
                     const RadialField& u, const Params& params);

/// The fiber (Nehari) map t -> E(t u), reduced to its homogeneous components.
struct FiberMap {
  ProblemKind kind;
  double hnorm_sq;
  double riesz_crit;
  double perturbation;
  double lambda;
  double pert_power;        ///< t-exponent of the perturbation term
  double pert_prefactor;    ///< lambda/2, lambda/(q+1) or lambda/(2p)
  double crit_power;        ///< 2 * 2*_alpha
  double two_star_alpha;

  double value(double t) const;
  double derivative(double t) const;
};

FiberMap fiber_map(ProblemKind kind, const RadialGrid& grid,
                   const RadialField& u, const Params& params);

/// Maximizer of the fiber map over t > 0 (bracketing + golden section).
/// Throws std::runtime_error if no positive bracket exists (u too small).
struct FiberMax {
  double t;
  double value;
};
FiberMax fiber_maximize(const FiberMap& fiber, double tol = 1e-10);

} // namespace choquard
