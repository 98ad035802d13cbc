#pragma once

#include <string>
#include <vector>

#include "choquard/params.hpp"

namespace choquard {

/// Nodal values of a radial function on a RadialGrid. The Dirichlet value
/// u(R) = 0 is implied, never stored; there is no node at the origin.
struct RadialField {
  std::vector<double> v;

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

struct GridSpec {
  double R = 1.0;     ///< outer radius
  int M = 256;        ///< interior nodes, >= 16
  double beta = 2.0;  ///< grading exponent, >= 1
};

/// Graded radial mesh on (0, R] with volume-weighted quadrature and the
/// angularly averaged Riesz kernel table for one (N, alpha). The kernel
/// table is built (or loaded from cache) on first kernel access.
///
/// Nodes r_i = R (i/(M+1))^beta, i = 1..M. Weight w_i integrates r^{N-1}
/// exactly over the midpoint cell, so sum w_i equals |B(0,R)| exactly.
/// kernel(i,j) is the spherical average of |x-y|^{-alpha} over directions,
/// at |x| = r_i, |y| = r_j; the double Riesz integral of radial densities
/// f, g is then sum_ij w_i w_j f_i K_ij g_j.
class RadialGrid {
 public:
  /// Builds nodes and weights. If cache_dir is nonempty, the kernel table
  /// is loaded from / saved to a binary cache keyed by (N, alpha, R, M,
  /// beta), invalidated on any parameter mismatch.
  RadialGrid(const GridSpec& spec, int N, double alpha,
             const std::string& cache_dir = "");

  int M() const { return M_; }
  int N() const { return N_; }
  double alpha() const { return alpha_; }
  double R() const { return R_; }
  double beta() const { return beta_; }

  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& weights() const { return w_; }

  double kernel(int i, int j) const {
    ensure_kernel();
    return K_[std::size_t(i) * M_ + j];
  }

  /// True when alpha >= N-1: the angular average diverges on the diagonal
  /// (still integrable in the double integral); the table carries a clipped
  /// diagonal and results there are accuracy-degraded.
  bool diagonal_clipped() const { return diagonal_clipped_; }

  /// sum_i w_i f_i, approximating the volume integral of f(|x|) over B(0,R).
  double integrate(const std::vector<double>& f) const;

  /// out_i = sum_j K_ij w_j f_j  (the discrete Riesz potential of density f).
  std::vector<double> kernel_apply(const std::vector<double>& f) const;

  /// Two-sided kernel pairing sum_ij w_i f_i K_ij w_j g_j.
  double kernel_pairing(const std::vector<double>& f,
                        const std::vector<double>& g) const;

  /// out_i = sum_j K_ij q_j for per-cell masses q (weights already absorbed).
  std::vector<double> kernel_apply_mass(const std::vector<double>& q) const;

  /// sum_ij q_i K_ij q_j for per-cell masses q.
  double kernel_quadratic(const std::vector<double>& q) const;

 private:
  int M_;
  int N_;
  double alpha_;
  double R_;
  double beta_;
  bool diagonal_clipped_ = false;
  std::vector<double> r_;
  std::vector<double> w_;
  std::string cache_path_;
  mutable std::vector<double> K_;  // M x M, symmetric, built lazily

  void ensure_kernel() const;
  void build_kernel() const;
  bool load_cache(const std::string& path) const;
  void save_cache(const std::string& path) const;
};

/// Spherical average of |x-y|^{-alpha} for |x| = r, |y| = s (r, s > 0).
/// Exposed for oracle tests; kernel tables are built from it.
double angular_kernel(int N, double alpha, double r, double s);

} // namespace choquard
