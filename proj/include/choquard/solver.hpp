#pragma once

#include <stdexcept>
#include <vector>

#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

/// Collapse to the zero field or a residual plateau above tolerance.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct SolveOptions {
  double residual_tol = 1e-6;  ///< on max_i |g_i| / w_i, relative to 1 + |level|
  int max_iter = 50000;
  int path_samples = 33;       ///< fiber-path energies recorded in the report
};

struct SolveReport {
  ProblemKind problem;
  Params params;
  RadialField solution;
  double level_c = 0.0;      ///< energy at the solution
  double residual = 0.0;     ///< max-norm of the mass-scaled discrete gradient
  double c_star = 0.0;       ///< compactness threshold from s_ha
  bool below_threshold = false;
  int iterations = 0;
  double mp_rho = 0.0;       ///< sphere radius with positive ray energy
  double mp_t_far = 0.0;     ///< ray scale with negative energy beyond rho
  std::vector<double> path_history;  ///< energies along t -> E(t u), sampled
};

/// Mountain-pass search: fiber-normalizes the seed, descends the
/// fiber-maximized energy (Barzilai-Borwein step, Armijo safeguard, the
/// restricted energy decreases every iteration), then polishes the residual
/// by unconstrained descent. s_ha fixes the threshold c*.
///
/// Throws ValidationError on hypothesis violations (linear: lambda >= lambda_1,
/// superlinear: q outside (1, 2*-1), nonlocal: p outside (1, 2*_alpha - 1)),
/// SolveFailure("TrivialAttractor") when the iterate collapses to zero, and
/// SolveFailure("NonConvergence") on a residual plateau.
SolveReport solve(ProblemKind problem, const RadialGrid& grid,
                  const Params& params, const RadialField& seed, double s_ha,
                  const SolveOptions& opts = {});

/// Max over trial_count random smooth Dirichlet test fields phi of
/// |<E'(u), phi>| / ||phi||_mu. Deterministic in the rng seed.
double verify_weak_form(const RadialGrid& grid, const RadialField& u,
                        ProblemKind problem, const Params& params,
                        int trial_count, unsigned rng_seed = 1u);

} // namespace choquard
