#pragma once

#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

/// One radial eigenpair of -Delta - mu/|x|^2 on B(0,R), Dirichlet.
struct EigenResult {
  int k;                ///< 1-based index
  double lambda_k;      ///< eigenvalue
  RadialField eigenfield;  ///< normalized to int u^2 = 1
  double residual;      ///< ||A u - lambda B u|| (B^{-1}-norm)
  int iterations;
};

/// First `count` radial eigenpairs of the generalized problem
/// (stiffness - mu hardy) u = lambda (mass) u, by shifted inverse iteration
/// with deflation. Requires 0 <= mu < mu_bar.
std::vector<EigenResult> eigenpairs(const RadialGrid& grid, const Params& params,
                                    int count);

/// Convenience: the first eigenvalue only.
double lambda1(const RadialGrid& grid, const Params& params);

} // namespace choquard
