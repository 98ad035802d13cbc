#include "choquard/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "choquard/bubbles.hpp"
#include "choquard/extremals.hpp"
#include "choquard/functionals.hpp"
#include "choquard/gammafn.hpp"
#include "choquard/report.hpp"
#include "choquard/solver.hpp"
#include "choquard/spectral.hpp"

namespace choquard {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Scale {
  int M_space;      ///< truncated whole-space grids (constants, extremal)
  int M_ball;       ///< unit-ball scan grid
  int M_quad;       ///< quadrature anchors
  int M_solve;      ///< existence runs
  int grad_fields;  ///< random fields per problem in the gradient check
  int scan_points;
};

Scale scale_for(const std::string& name) {
  if (name == "full") return {1536, 512, 512, 1024, 20, 12};
  return {768, 256, 256, 384, 20, 9};
}

double closed_form_sobolev(int N) {
  return kPi * N * (N - 2) *
         std::pow(gamma_fn(0.5 * N) / gamma_fn(double(N)), 2.0 / N);
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

/// Everything computed once from one truncated whole-space run and shared
/// between the sandwich, decay, bubble and existence checks.
struct SpaceRun {
  std::shared_ptr<RadialGrid> grid;
  ExtremalResult ex;
  double s_computed = 0.0;
  double s_mu_computed = 0.0;
  double refine_tol = 0.0;  ///< relative grid tolerance |s_ha(M) - s_ha(M/2)| / s_ha
};

struct Context {
  AcceptanceOptions opts;
  Scale sc;
  std::map<std::string, SpaceRun> space_runs;

  static constexpr double kTruncationRadius = 1e3;
  static constexpr double kSpaceBeta = 3.0;

  const SpaceRun& space_run(int N, double alpha, double mu) {
    std::ostringstream key;
    key << N << "_" << alpha << "_" << mu;
    auto it = space_runs.find(key.str());
    if (it != space_runs.end()) return it->second;

    Params prm;
    prm.N = N;
    prm.alpha = alpha;
    prm.mu = mu;
    prm.R = kTruncationRadius;

    SpaceRun run;
    run.grid = std::make_shared<RadialGrid>(
        GridSpec{kTruncationRadius, sc.M_space, kSpaceBeta}, N, alpha,
        opts.cache_dir);
    run.ex = extremal_u_mu(*run.grid, prm);

    RadialGrid coarse(GridSpec{kTruncationRadius, sc.M_space / 2, kSpaceBeta},
                      N, alpha, opts.cache_dir);
    const double lo = extremal_u_mu(coarse, prm).s_ha;
    run.refine_tol = std::fabs(run.ex.s_ha - lo) / run.ex.s_ha;

    run.s_computed = minimize_constant(ConstantName::S, *run.grid, prm,
                                       talenti_profile(*run.grid, N))
                         .value;
    run.s_mu_computed =
        minimize_constant(ConstantName::S_mu, *run.grid, prm,
                          two_exponent_profile(*run.grid, derive(prm)))
            .value;
    return space_runs.emplace(key.str(), std::move(run)).first->second;
  }
};

using Check = CheckResult (*)(Context&);

CheckResult check_derived_identities(Context& ctx) {
  CheckResult res{1, "derived-constant identities", true, "", 0.0};
  std::mt19937 rng(ctx.opts.seed);
  std::uniform_int_distribution<int> dim(3, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    Params prm;
    prm.N = dim(rng);
    const double alpha_max = prm.N - std::max(prm.N - 4, 0);
    prm.alpha = 0.25 + unit(rng) * (alpha_max - 0.5);
    const double mu_bar = 0.25 * (prm.N - 2.0) * (prm.N - 2.0);
    prm.mu = unit(rng) * 0.99 * mu_bar;
    const Derived d = derive(prm);
    worst = std::max(worst, std::fabs(d.gamma * d.gamma_prime - prm.mu) /
                                std::max(1.0, prm.mu));
    worst = std::max(worst, std::fabs(d.a * d.a - (1.0 - prm.mu / d.mu_bar)));
    worst = std::max(worst, std::fabs(d.two_star_alpha -
                                      (2.0 * prm.N - prm.alpha) / (prm.N - 2)) /
                                d.two_star_alpha);
  }
  res.pass = worst <= 1e-14;
  res.detail = "worst relative defect " + fmt(worst, 3) + " over 200 draws";
  return res;
}

CheckResult check_eigenvalue_anchor(Context& ctx) {
  CheckResult res{2, "first eigenvalue anchor and scaling", true, "", 0.0};
  Params prm;
  prm.N = 3;
  prm.alpha = 1.0;
  prm.mu = 0.0;
  RadialGrid g1(GridSpec{1.0, 2048, 1.0}, 3, 1.0, ctx.opts.cache_dir);
  const double l1 = lambda1(g1, prm);
  const double rel = std::fabs(l1 - kPi * kPi) / (kPi * kPi);

  RadialGrid g2(GridSpec{2.0, 2048, 1.0}, 3, 1.0, ctx.opts.cache_dir);
  prm.R = 2.0;
  const double l2 = lambda1(g2, prm);
  const double scaling_rel = std::fabs(l2 - l1 / 4.0) / (l1 / 4.0);

  res.pass = rel <= 1e-4 && scaling_rel <= 1e-6;
  res.detail = "lambda_1 = " + fmt(l1, 10) + " (pi^2 defect " + fmt(rel, 3) +
               "), R-scaling defect " + fmt(scaling_rel, 3);
  return res;
}

CheckResult check_quadrature_anchors(Context& ctx) {
  CheckResult res{3, "quadrature anchors", true, "", 0.0};
  RadialGrid grid(GridSpec{1.0, ctx.sc.M_quad, 1.5}, 3, 1.0, ctx.opts.cache_dir);
  std::vector<double> one(grid.M(), 1.0);
  const double vol = grid.integrate(one);
  const double vol_exact = 4.0 * kPi / 3.0;
  const double vol_rel = std::fabs(vol - vol_exact) / vol_exact;

  // self-energy = half the raw double integral of 1/|x-y| over the ball
  const double coulomb = 0.5 * grid.kernel_pairing(one, one);
  const double coulomb_exact = 16.0 * kPi * kPi / 15.0;
  const double coulomb_rel = std::fabs(coulomb - coulomb_exact) / coulomb_exact;

  res.pass = vol_rel <= 1e-6 && coulomb_rel <= 1e-3;
  res.detail = "volume defect " + fmt(vol_rel, 3) + ", uniform-ball Coulomb defect " +
               fmt(coulomb_rel, 3);
  return res;
}

CheckResult check_gradients(Context& ctx) {
  CheckResult res{4, "energy gradients vs finite differences", true, "", 0.0};
  RadialGrid grid(GridSpec{1.0, 256, 2.0}, 4, 2.0, ctx.opts.cache_dir);
  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.5;
  prm.lambda = 0.7;
  prm.q = 2.0;
  prm.p = 1.5;
  std::mt19937 rng(ctx.opts.seed + 4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto& r = grid.nodes();
  double worst = 0.0;
  for (ProblemKind kind :
       {ProblemKind::Linear, ProblemKind::Superlinear, ProblemKind::Nonlocal}) {
    for (int t = 0; t < ctx.sc.grad_fields; ++t) {
      RadialField u, d;
      u.v.resize(grid.M());
      d.v.resize(grid.M());
      for (int i = 0; i < grid.M(); ++i) {
        // smooth random fields: low sine modes keep the FD step meaningful
        double su = 0.0, sd = 0.0;
        for (int k = 1; k <= 4; ++k) {
          su += unit(rng) * std::sin(k * kPi * r[i]);
          sd += unit(rng) * std::sin(k * kPi * r[i]);
        }
        u[i] = su;
        d[i] = sd;
      }
      const RadialField g = gradient(kind, grid, u, prm);
      double gd = 0.0, dn = 0.0;
      for (int i = 0; i < grid.M(); ++i) {
        gd += g[i] * d[i];
        dn += d[i] * d[i];
      }
      const double h = 1e-6 / std::sqrt(dn);
      RadialField up = u, um = u;
      for (int i = 0; i < grid.M(); ++i) {
        up[i] += h * d[i];
        um[i] -= h * d[i];
      }
      const double fd = (energy(kind, grid, up, prm).total -
                         energy(kind, grid, um, prm).total) /
                        (2.0 * h);
      worst = std::max(worst, std::fabs(fd - gd) / std::max(1.0, std::fabs(gd)));
    }
  }
  res.pass = worst <= 1e-6;
  res.detail = "worst directional-derivative defect " + fmt(worst, 3);
  return res;
}

CheckResult check_sandwich(Context& ctx) {
  CheckResult res{5, "sharp-constant sandwich and mu=0 collapse", true, "", 0.0};
  std::ostringstream detail;
  struct Case { int N; double alpha, mu; };
  for (const Case c : {Case{3, 1.0, 0.1}, Case{4, 2.0, 0.5}, Case{5, 3.0, 1.0}}) {
    const SpaceRun& run = ctx.space_run(c.N, c.alpha, c.mu);
    const Derived d = derive(Params{c.N, c.alpha, c.mu, 0.0, {}, {},
                                    Context::kTruncationRadius});
    const double cpow = std::pow(d.hls_constant, 1.0 / d.two_star_alpha);
    const double lower = run.s_mu_computed / cpow;
    const double upper = run.s_computed / cpow;
    // non-strict sandwich with the measured refinement tolerance as slack
    const double tol = 3.0 * run.refine_tol;
    const bool ok = lower <= run.ex.s_ha * (1.0 + tol) &&
                    run.ex.s_ha * (1.0 - tol) < upper;
    if (!ok) res.pass = false;
    detail << "(" << c.N << "," << c.alpha << "," << c.mu << "): " << fmt(lower)
           << " <= " << fmt(run.ex.s_ha) << " <= " << fmt(upper) << ", tol "
           << fmt(tol, 3) << (ok ? " ok; " : " FAIL; ");
  }
  {
    Params prm;
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.0;
    prm.R = Context::kTruncationRadius;
    RadialGrid grid(GridSpec{Context::kTruncationRadius, ctx.sc.M_space,
                             Context::kSpaceBeta},
                    4, 2.0, ctx.opts.cache_dir);
    const double s_ha0 =
        minimize_constant(ConstantName::S_HA, grid, prm,
                          talenti_profile(grid, 4))
            .value;
    const Derived d = derive(prm);
    const double target = closed_form_sobolev(4) /
                          std::pow(d.hls_constant, 1.0 / d.two_star_alpha);
    const double rel = std::fabs(s_ha0 - target) / target;
    if (rel > 1e-3) res.pass = false;
    detail << "mu=0 collapse defect " << fmt(rel, 3);
  }
  res.detail = detail.str();
  return res;
}

CheckResult check_decay(Context& ctx) {
  CheckResult res{6, "extremal decay exponents", true, "", 0.0};
  std::ostringstream detail;
  struct Case { int N; double alpha, mu; };
  for (const Case c : {Case{4, 2.0, 0.5}, Case{5, 3.0, 1.0}}) {
    const SpaceRun& run = ctx.space_run(c.N, c.alpha, c.mu);
    const Derived d = derive(Params{c.N, c.alpha, c.mu, 0.0, {}, {},
                                    Context::kTruncationRadius});
    const DecayReport dr = verify_decay(*run.grid, run.ex.u, d);
    const double inner_err = std::fabs(dr.inner_slope + d.gamma_prime);
    const double outer_err = std::fabs(dr.outer_slope + d.gamma);
    const bool ok = inner_err <= 0.1 && outer_err <= 0.1;
    if (!ok) res.pass = false;
    detail << "(" << c.N << "," << c.mu << "): inner " << fmt(dr.inner_slope, 4)
           << " vs " << fmt(-d.gamma_prime, 4) << ", outer "
           << fmt(dr.outer_slope, 4) << " vs " << fmt(-d.gamma, 4)
           << (ok ? " ok; " : " FAIL; ");
  }
  res.detail = detail.str();
  return res;
}

struct FitCase {
  const char* column;
  double expected;
  std::optional<double> q;
  std::optional<double> p;
};

CheckResult check_bubble_rates(Context& ctx) {
  CheckResult res{7, "bubble energy-term rates", true, "", 0.0};
  const CutoffSpec cutoff;
  const std::vector<double> eps =
      log_spaced(1.5e-3, 8e-3, ctx.sc.scan_points);

  // Expected exponents. Each term is core-rate vs tail-rate competition:
  // a k-th power of the bubble contributes tail mass ~ eps^{k(N-2)a/2} at
  // fixed radius, and core mass ~ eps^{N - k(N-2)/2} when gamma k > N; the
  // observable slope is the smaller exponent, and the fit over a finite
  // eps window is only clean when |gamma k - N| is not too small. The
  // (N, alpha, mu) of each case is chosen so the predicted exponent is the
  // dominant one with margin:
  //  - a_term, cutoff-gradient term: (N-2)a at (4,2,0.5)
  //  - |u|^{q+1}: regime flip across the case boundary; q = 2 is the core
  //    case N - (N-2)(q+1)/2 at (4,2,0.5); q = 1.1 is the tail case
  //    (q+1)(N-2)a/2 at (4,2,0.75)
  //  - q = 1 (the L2 column): min(2, (N-2)a) = (N-2)a at (4,2,0.75)
  //  - p-power Riesz term: 2N - alpha - (N-2)p, needs gamma p > N, which
  //    (4,2,*) cannot satisfy for admissible p; holds at (4,1,0.1), p = 2.4
  const double a45 = derive(Params{4, 2.0, 0.5, 0.0, {}, {}, 1.0}).a;
  const double a75 = derive(Params{4, 2.0, 0.75, 0.0, {}, {}, 1.0}).a;
  struct SetCase { double alpha, mu; FitCase fit; };
  const std::vector<SetCase> cases = {
      {2.0, 0.5, {"a_term", 2.0 * a45, std::nullopt, std::nullopt}},
      {2.0, 0.5, {"lq1", 4.0 - 3.0, 2.0, std::nullopt}},
      {2.0, 0.75, {"lq1", 2.1 * a75, 1.1, std::nullopt}},
      {2.0, 0.75, {"l2", 2.0 * a75, std::nullopt, std::nullopt}},
      {1.0, 0.1, {"riesz_p", 8.0 - 1.0 - 2.0 * 2.4, std::nullopt, 2.4}},
  };

  std::ostringstream detail;
  for (const SetCase& sc : cases) {
    const FitCase& c = sc.fit;
    const SpaceRun& run = ctx.space_run(4, sc.alpha, sc.mu);
    RadialProfileTable table(run.grid->nodes(), run.ex.u.v);
    RadialGrid ball(GridSpec{1.0, ctx.sc.M_ball, 3.0}, 4, sc.alpha,
                    ctx.opts.cache_dir);
    Params prm;
    prm.N = 4;
    prm.alpha = sc.alpha;
    prm.mu = sc.mu;
    prm.lambda = 1.0;
    prm.q = c.q;
    prm.p = c.p;
    const ProblemKind kind = c.p ? ProblemKind::Nonlocal
                             : c.q ? ProblemKind::Superlinear
                                   : ProblemKind::Linear;
    const auto rows = scan(kind, ball, table, eps, prm, cutoff, run.ex.s_ha);
    const RateFit fit = fit_rate(rows, c.column, 0.0);
    const double err = std::fabs(fit.slope - c.expected);
    const bool ok = err <= 0.1 && fit.r2 >= 0.98;
    if (!ok) res.pass = false;
    detail << c.column;
    if (c.q) detail << "(q=" << *c.q << ")";
    if (c.p) detail << "(p=" << *c.p << ")";
    detail << ": slope " << fmt(fit.slope, 4) << " vs " << fmt(c.expected, 4)
           << " r2 " << fmt(fit.r2, 4) << (ok ? " ok; " : " FAIL; ");
  }
  res.detail = detail.str();
  return res;
}

CheckResult check_threshold_gap(Context& ctx) {
  CheckResult res{8, "threshold gap below c*", true, "", 0.0};
  std::ostringstream detail;
  const CutoffSpec cutoff;
  const double eps_gap = 0.01;

  {
    // linear regime (needs mu <= mu_bar - 1, i.e. (N-2)a >= 2): the
    // perturbation gain ~ lambda eps^2 beats the eps^{(N-2)a} cutoff
    // remainder; mu = 0.2 gives (N-2)a = 2.86 so the margin is real at
    // reachable eps, and lambda close to lambda_1 maximizes the gain
    const SpaceRun& run = ctx.space_run(5, 3.0, 0.2);
    RadialProfileTable table(run.grid->nodes(), run.ex.u.v);
    RadialGrid ball(GridSpec{1.0, ctx.sc.M_ball, 3.0}, 5, 3.0, ctx.opts.cache_dir);
    Params prm;
    prm.N = 5;
    prm.alpha = 3.0;
    prm.mu = 0.2;
    prm.lambda = 0.95 * lambda1(ball, prm);
    const auto rows = scan(ProblemKind::Linear, ball, table,
                           log_spaced(eps_gap, 4.0 * eps_gap, 8), prm, cutoff,
                           run.ex.s_ha);
    const double gap = rows.front().c_star_gap;
    if (!(gap > 0.0)) res.pass = false;
    detail << "linear gap " << fmt(gap, 4) << (gap > 0.0 ? " ok; " : " FAIL; ");
  }

  const SpaceRun& run = ctx.space_run(4, 2.0, 0.5);
  RadialProfileTable table(run.grid->nodes(), run.ex.u.v);
  RadialGrid ball(GridSpec{1.0, ctx.sc.M_ball, 3.0}, 4, 2.0, ctx.opts.cache_dir);

  {
    // superlinear, any-lambda regime (dimension condition holds at q = 2;
    // lambda is free, and a larger lambda moves the gap crossover to
    // reachable eps)
    Params prm;
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.5;
    prm.lambda = 20.0;
    prm.q = 2.0;
    const auto rows = scan(ProblemKind::Superlinear, ball, table,
                           log_spaced(eps_gap, 4.0 * eps_gap, 8), prm, cutoff,
                           run.ex.s_ha);
    const double gap = rows.front().c_star_gap;
    if (!(gap > 0.0)) res.pass = false;
    detail << "superlinear(q=2) gap " << fmt(gap, 4)
           << (gap > 0.0 ? " ok; " : " FAIL; ");
  }
  {
    // superlinear, lambda-large regime (q = 1.1 violates the condition)
    Params prm;
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.5;
    prm.lambda = 0.0;
    prm.q = 1.1;
    const double l0 = find_lambda0(ProblemKind::Superlinear, ball, table, prm,
                                   cutoff, run.ex.s_ha, eps_gap);
    prm.lambda = 2.0 * l0;
    const auto rows = scan(ProblemKind::Superlinear, ball, table,
                           log_spaced(eps_gap, 4.0 * eps_gap, 8), prm, cutoff,
                           run.ex.s_ha);
    const double gap = rows.front().c_star_gap;
    if (!(std::isfinite(l0) && gap > 0.0)) res.pass = false;
    detail << "superlinear(q=1.1) lambda0 " << fmt(l0, 4) << " gap at 2 lambda0 "
           << fmt(gap, 4) << (gap > 0.0 ? " ok; " : " FAIL; ");
  }
  {
    // nonlocal, lambda-large regime
    Params prm;
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.5;
    prm.lambda = 0.0;
    prm.p = 1.5;
    const double l0 = find_lambda0(ProblemKind::Nonlocal, ball, table, prm,
                                   cutoff, run.ex.s_ha, eps_gap);
    prm.lambda = 2.0 * l0;
    const auto rows = scan(ProblemKind::Nonlocal, ball, table,
                           log_spaced(eps_gap, 4.0 * eps_gap, 8), prm, cutoff,
                           run.ex.s_ha);
    const double gap = rows.front().c_star_gap;
    if (!(std::isfinite(l0) && gap > 0.0)) res.pass = false;
    detail << "nonlocal(p=1.5) lambda0 " << fmt(l0, 4) << " gap at 2 lambda0 "
           << fmt(gap, 4) << (gap > 0.0 ? " ok; " : " FAIL;");
  }
  res.detail = detail.str();
  return res;
}

CheckResult check_existence(Context& ctx) {
  CheckResult res{9, "existence runs for the three problems", true, "", 0.0};
  std::ostringstream detail;
  const CutoffSpec cutoff;

  // The linear theorem's attainment regime needs mu <= mu_bar - 1, so its
  // run lives at (5,3,0.2); the superlinear and nonlocal runs share
  // (4,2,0.5).
  const SpaceRun& run5 = ctx.space_run(5, 3.0, 0.2);
  RadialProfileTable table5(run5.grid->nodes(), run5.ex.u.v);
  RadialGrid ball5(GridSpec{1.0, ctx.sc.M_solve, 3.0}, 5, 3.0,
                   ctx.opts.cache_dir);
  const RadialField seed5 = build_bubble(ball5, table5, 0.02, cutoff);

  const SpaceRun& run = ctx.space_run(4, 2.0, 0.5);
  RadialProfileTable table(run.grid->nodes(), run.ex.u.v);
  RadialGrid ball(GridSpec{1.0, ctx.sc.M_solve, 2.0}, 4, 2.0, ctx.opts.cache_dir);
  const RadialField seed = build_bubble(ball, table, 0.02, cutoff);

  struct Job {
    ProblemKind kind;
    Params prm;
    const RadialGrid* grid;
    const RadialField* seed;
    double s_ha;
  };
  std::vector<Job> jobs;
  {
    Params prm;
    prm.N = 5;
    prm.alpha = 3.0;
    prm.mu = 0.2;
    prm.lambda = 0.9 * lambda1(ball5, prm);
    jobs.push_back({ProblemKind::Linear, prm, &ball5, &seed5, run5.ex.s_ha});
  }
  {
    Params prm;
    prm.N = 4;
    prm.alpha = 2.0;
    prm.mu = 0.5;
    prm.lambda = 1.0;
    prm.q = 2.0;
    jobs.push_back({ProblemKind::Superlinear, prm, &ball, &seed, run.ex.s_ha});
    prm.q.reset();
    prm.p = 1.5;
    prm.lambda = 2.0 * find_lambda0(ProblemKind::Nonlocal, ball, table, prm,
                                    cutoff, run.ex.s_ha, 0.02);
    jobs.push_back({ProblemKind::Nonlocal, prm, &ball, &seed, run.ex.s_ha});
  }

  for (const Job& job : jobs) {
    try {
      const SolveReport rep =
          solve(job.kind, *job.grid, job.prm, *job.seed, job.s_ha);
      const double defect = verify_weak_form(*job.grid, rep.solution, job.kind,
                                             job.prm, 20, ctx.opts.seed + 9);
      const bool ok = rep.residual <= 1e-6 * (1.0 + std::fabs(rep.level_c)) &&
                      defect <= 1e-5 && rep.level_c > 0.0 &&
                      rep.level_c < rep.c_star;
      if (!ok) res.pass = false;
      detail << problem_name(job.kind) << ": level " << fmt(rep.level_c, 6)
             << " (c* " << fmt(rep.c_star, 6) << "), residual "
             << fmt(rep.residual, 3) << ", defect " << fmt(defect, 3)
             << (ok ? " ok; " : " FAIL; ");
    } catch (const std::exception& e) {
      res.pass = false;
      detail << problem_name(job.kind) << ": " << e.what() << " FAIL; ";
    }
  }
  res.detail = detail.str();
  return res;
}

void emit_artifacts(Context& ctx, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const SpaceRun& run = ctx.space_run(4, 2.0, 0.5);

  Params prm;
  prm.N = 4;
  prm.alpha = 2.0;
  prm.mu = 0.5;
  RadialGrid ball(GridSpec{1.0, 128, 2.0}, 4, 2.0, ctx.opts.cache_dir);
  {
    const auto pairs = eigenpairs(ball, prm, 4);
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : pairs)
      rows.push_back({std::to_string(e.k), format_real(e.lambda_k),
                      format_real(e.residual)});
    write_csv(dir + "/eigenvalues.csv", {"k", "lambda_k", "residual"}, rows,
              "seed = " + std::to_string(ctx.opts.seed));
  }
  {
    RadialProfileTable table(run.grid->nodes(), run.ex.u.v);
    Params sp = prm;
    sp.lambda = 1.0;
    sp.q = 2.0;
    const auto rows_s =
        scan(ProblemKind::Superlinear, ball, table, log_spaced(4e-3, 2e-2, 8),
             sp, CutoffSpec{}, run.ex.s_ha);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rows_s)
      rows.push_back({format_real(r.epsilon), format_real(r.hnorm_sq),
                      format_real(r.lq1), format_real(r.max_fiber_energy),
                      format_real(r.c_star_gap)});
    write_csv(dir + "/bubble_scan.csv",
              {"epsilon", "hnorm_sq", "lq1", "max_fiber_energy", "c_star_gap"},
              rows, "seed = " + std::to_string(ctx.opts.seed));
  }
}

CheckResult check_determinism(Context& ctx) {
  CheckResult res{10, "byte-identical reruns", true, "", 0.0};
  const std::string base =
      ctx.opts.output_dir.empty() ? ".acceptance-tmp" : ctx.opts.output_dir;
  const std::string d1 = base + "/det1", d2 = base + "/det2";
  emit_artifacts(ctx, d1);
  emit_artifacts(ctx, d2);
  std::ostringstream detail;
  for (const char* name : {"eigenvalues.csv", "bubble_scan.csv"}) {
    std::ifstream f1(d1 + "/" + name, std::ios::binary);
    std::ifstream f2(d2 + "/" + name, std::ios::binary);
    std::ostringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    const bool same = f1 && f2 && b1.str() == b2.str() && !b1.str().empty();
    if (!same) res.pass = false;
    detail << name << (same ? " identical; " : " DIFFERS; ");
  }
  res.detail = detail.str();
  return res;
}

} // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts,
                                        std::ostream* log) {
  Context ctx{opts, scale_for(opts.scale), {}};
  const Check checks[] = {
      check_derived_identities, check_eigenvalue_anchor,
      check_quadrature_anchors, check_gradients,
      check_sandwich,           check_decay,
      check_bubble_rates,       check_threshold_gap,
      check_existence,          check_determinism,
  };
  std::vector<CheckResult> out;
  for (const Check check : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = check(ctx);
    } catch (const std::exception& e) {
      res.id = int(out.size()) + 1;
      res.name = "check " + std::to_string(res.id);
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (log)
      (*log) << (res.pass ? "PASS" : "FAIL") << "  [" << res.id << "] "
             << res.name << "  (" << fmt(res.seconds, 3) << "s)\n      "
             << res.detail << "\n";
    out.push_back(std::move(res));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

} // namespace choquard
