#include "choquard/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "choquard/gammafn.hpp"

namespace choquard {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 16-point Gauss-Legendre rule on [-1, 1], nodes/weights via Newton on P_16.
struct GaussRule {
  double x[16];
  double w[16];
  GaussRule() {
    const int n = 16;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double p0, p1;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-15) break;
      }
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussRule& gauss16() {
  static const GaussRule rule;
  return rule;
}

// Integrand of the angular average at radius ratio rho:
// (1 + rho^2 - 2 rho cos(theta))^{-alpha/2} sin^{N-2}(theta).
inline double angular_integrand(int N, double alpha, double rho, double theta) {
  const double c = std::cos(theta);
  const double d = 1.0 + rho * rho - 2.0 * rho * c;
  return std::pow(d, -0.5 * alpha) * std::pow(std::sin(theta), double(N - 2));
}

double panel_integral(int N, double alpha, double rho, double lo, double hi) {
  const GaussRule& g = gauss16();
  const double mid = 0.5 * (lo + hi);
  const double hw = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int k = 0; k < 16; ++k)
    acc += g.w[k] * angular_integrand(N, alpha, rho, mid + hw * g.x[k]);
  return acc * hw;
}

// kappa(rho) = c_N * int_0^pi (1+rho^2-2 rho cos)^(-alpha/2) sin^{N-2}, so the
// angular average of |x-y|^{-alpha} equals max(r,s)^{-alpha} kappa(min/max).
// Panels refine geometrically toward theta = 0 where the integrand peaks on
// the scale 1-rho; at rho = 1 the power tail theta^{N-2-alpha} is summed
// analytically below the smallest panel (only finite for alpha < N-1).
double kappa(int N, double alpha, double rho, bool* clipped) {
  const double c_n = gamma_fn(0.5 * N) / (std::sqrt(kPi) * gamma_fn(0.5 * (N - 1)));
  const double theta_floor = (rho < 1.0) ? std::min(kPi, 1.0 - rho) : 1e-7;
  double acc = 0.0;
  double hi = kPi;
  while (hi > theta_floor) {
    const double lo = std::max(theta_floor, 0.5 * hi);
    acc += panel_integral(N, alpha, rho, lo, hi);
    hi = lo;
  }
  if (rho < 1.0) {
    // smooth head panel: denominator bounded below by (1-rho)^2
    acc += panel_integral(N, alpha, rho, 0.0, hi);
  } else {
    const double pw = double(N) - 1.0 - alpha;
    if (pw > 0.0) {
      acc += std::pow(hi, pw) / pw;  // leading tail, O(theta^2) relative error
    } else if (clipped) {
      *clipped = true;  // divergent angular average; diagonal left clipped
    }
  }
  return c_n * acc;
}

} // namespace

double angular_kernel(int N, double alpha, double r, double s) {
  const double m = std::max(r, s);
  const double rho = std::min(r, s) / m;
  return std::pow(m, -alpha) * kappa(N, alpha, rho, nullptr);
}

RadialGrid::RadialGrid(const GridSpec& spec, int N, double alpha,
                       const std::string& cache_dir)
    : M_(spec.M), N_(N), alpha_(alpha), R_(spec.R), beta_(spec.beta) {
  if (spec.M < 16) throw ValidationError("GridTooCoarse", "M must be >= 16");
  if (spec.beta < 1.0) throw ValidationError("GradingOutOfRange", "beta must be >= 1");
  if (!(spec.R > 0.0)) throw ValidationError("RadiusNonPositive", "R must be > 0");
  if (N < 3) throw ValidationError("DimensionOutOfRange", "N must be >= 3");
  if (!(alpha > 0.0 && alpha < N))
    throw ValidationError("AlphaOutOfRange", "kernel needs 0 < alpha < N");

  r_.resize(M_);
  w_.resize(M_);
  for (int i = 1; i <= M_; ++i)
    r_[i - 1] = R_ * std::pow(double(i) / double(M_ + 1), beta_);

  // midpoint cells [m_{i-1}, m_i]; w_i integrates omega r^{N-1} exactly per cell
  const double omega = sphere_area(N_);
  double prev_edge_pow = 0.0;
  for (int i = 0; i < M_; ++i) {
    const double edge = (i + 1 < M_) ? 0.5 * (r_[i] + r_[i + 1]) : R_;
    const double edge_pow = std::pow(edge, double(N_));
    w_[i] = omega * (edge_pow - prev_edge_pow) / double(N_);
    prev_edge_pow = edge_pow;
  }

  diagonal_clipped_ = alpha_ >= double(N_) - 1.0;

  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    // key the file by the exact parameter tuple
    char name[160];
    std::snprintf(name, sizeof(name), "kernel_N%d_a%.17g_R%.17g_M%d_b%.17g.bin",
                  N_, alpha_, R_, M_, beta_);
    cache_path_ = (std::filesystem::path(cache_dir) / name).string();
  }
}

void RadialGrid::ensure_kernel() const {
  if (!K_.empty()) return;
  if (!cache_path_.empty() && load_cache(cache_path_)) return;
  build_kernel();
  if (!cache_path_.empty()) save_cache(cache_path_);
}

void RadialGrid::build_kernel() const {
  K_.assign(std::size_t(M_) * M_, 0.0);
  for (int i = 0; i < M_; ++i) {
    for (int j = i; j < M_; ++j) {
      const double m = r_[j];  // nodes increasing, so max(r_i, r_j) = r_j
      const double rho = r_[i] / m;
      bool clipped = false;
      const double k = std::pow(m, -alpha_) * kappa(N_, alpha_, rho, &clipped);
      K_[std::size_t(i) * M_ + j] = k;
      K_[std::size_t(j) * M_ + i] = k;
    }
  }
}

namespace {
struct CacheHeader {
  char magic[8];
  std::int32_t n;
  std::int32_t m;
  double alpha;
  double radius;
  double beta;
};
constexpr char kMagic[8] = {'C', 'H', 'Q', 'K', '1', 0, 0, 0};
} // namespace

bool RadialGrid::load_cache(const std::string& path) const {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, kMagic, 8) != 0 || h.n != N_ || h.m != M_ ||
      h.alpha != alpha_ || h.radius != R_ || h.beta != beta_)
    return false;
  K_.resize(std::size_t(M_) * M_);
  in.read(reinterpret_cast<char*>(K_.data()),
          std::streamsize(K_.size() * sizeof(double)));
  return bool(in);
}

void RadialGrid::save_cache(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) return;
  CacheHeader h{};
  std::memcpy(h.magic, kMagic, 8);
  h.n = N_;
  h.m = M_;
  h.alpha = alpha_;
  h.radius = R_;
  h.beta = beta_;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(K_.data()),
            std::streamsize(K_.size() * sizeof(double)));
}

double RadialGrid::integrate(const std::vector<double>& f) const {
  if (int(f.size()) != M_)
    throw std::invalid_argument("integrate: field/grid size mismatch");
  double acc = 0.0;
  for (int i = 0; i < M_; ++i) acc += w_[i] * f[i];
  return acc;
}

std::vector<double> RadialGrid::kernel_apply(const std::vector<double>& f) const {
  if (int(f.size()) != M_)
    throw std::invalid_argument("kernel_apply: field/grid size mismatch");
  ensure_kernel();
  std::vector<double> wf(M_), out(M_, 0.0);
  for (int j = 0; j < M_; ++j) wf[j] = w_[j] * f[j];
  for (int i = 0; i < M_; ++i) {
    const double* row = &K_[std::size_t(i) * M_];
    double acc = 0.0;
    for (int j = 0; j < M_; ++j) acc += row[j] * wf[j];
    out[i] = acc;
  }
  return out;
}

double RadialGrid::kernel_pairing(const std::vector<double>& f,
                                  const std::vector<double>& g) const {
  const std::vector<double> kg = kernel_apply(g);
  double acc = 0.0;
  for (int i = 0; i < M_; ++i) acc += w_[i] * f[i] * kg[i];
  return acc;
}

std::vector<double> RadialGrid::kernel_apply_mass(
    const std::vector<double>& q) const {
  if (int(q.size()) != M_)
    throw std::invalid_argument("kernel_apply_mass: field/grid size mismatch");
  ensure_kernel();
  std::vector<double> out(M_, 0.0);
  for (int i = 0; i < M_; ++i) {
    const double* row = &K_[std::size_t(i) * M_];
    double acc = 0.0;
    for (int j = 0; j < M_; ++j) acc += row[j] * q[j];
    out[i] = acc;
  }
  return out;
}

double RadialGrid::kernel_quadratic(const std::vector<double>& q) const {
  const std::vector<double> kq = kernel_apply_mass(q);
  double acc = 0.0;
  for (int i = 0; i < M_; ++i) acc += q[i] * kq[i];
  return acc;
}

} // namespace choquard
