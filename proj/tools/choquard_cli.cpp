#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "choquard/acceptance.hpp"
#include "choquard/bubbles.hpp"
#include "choquard/config.hpp"
#include "choquard/extremals.hpp"
#include "choquard/functionals.hpp"
#include "choquard/report.hpp"
#include "choquard/solver.hpp"
#include "choquard/spectral.hpp"

namespace {

using namespace choquard;

constexpr const char* kUsage = R"(usage: choquard <command> [--config FILE] [--key value ...]

commands:
  derive       print closed-form derived quantities for (N, alpha, mu)
  grid-check   quadrature and kernel diagnostics for the configured grid
  eig          first eig_count radial eigenvalues (CSV)
  constants    sharp constants S, S_mu, S_HA on the truncated domain
  extremal     extremal profile, normalization and decay-slope fits
  bubble-scan  energy ingredients of the bubble family over epsilon
  solve        mountain-pass run for the configured problem
  verify-all   acceptance suite at the configured scale (quick | full)

keys mirror the flat config file (key = value); command-line values win.
exit codes: 0 ok, 2 validation error, 3 non-convergence, 4 acceptance failure.
)";

ProblemKind kind_of(const std::string& name) {
  if (name == "linear") return ProblemKind::Linear;
  if (name == "superlinear") return ProblemKind::Superlinear;
  return ProblemKind::Nonlocal;
}

std::vector<std::string> g_emitted;

void emit_csv(const RunConfig& cfg, const std::string& name,
              const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::filesystem::create_directories(cfg.output_dir);
  write_csv(cfg.output_dir + "/" + name, header, rows, cfg.echo());
  g_emitted.push_back(name);
}

void emit_json(const RunConfig& cfg, const std::string& name,
               const nlohmann::json& j) {
  std::filesystem::create_directories(cfg.output_dir);
  nlohmann::json full = j;
  full["config"] = cfg.echo();
  write_text(cfg.output_dir + "/" + name, full.dump(2) + "\n");
  g_emitted.push_back(name);
}

RadialGrid ball_grid(const RunConfig& cfg) {
  return RadialGrid(GridSpec{cfg.grid_R, cfg.grid_M, cfg.grid_beta},
                    cfg.params.N, cfg.params.alpha, cfg.cache_dir);
}

RadialGrid space_grid(const RunConfig& cfg) {
  return RadialGrid(GridSpec{cfg.truncation_radius, cfg.grid_M, cfg.grid_beta},
                    cfg.params.N, cfg.params.alpha, cfg.cache_dir);
}

int cmd_derive(const RunConfig& cfg) {
  const Derived d = derive(cfg.params);
  std::cout << "mu_bar = " << format_real(d.mu_bar) << "\n"
            << "a = " << format_real(d.a) << "\n"
            << "gamma = " << format_real(d.gamma) << "\n"
            << "gamma_prime = " << format_real(d.gamma_prime) << "\n"
            << "2* = " << format_real(d.two_star) << "\n"
            << "2*_alpha = " << format_real(d.two_star_alpha) << "\n"
            << "2_*alpha = " << format_real(d.two_lower_alpha) << "\n"
            << "C(N,alpha) = " << format_real(d.hls_constant) << "\n";
  emit_csv(cfg, "derived.csv",
           {"mu_bar", "a", "gamma", "gamma_prime", "two_star", "two_star_alpha",
            "two_lower_alpha", "hls_constant"},
           {{format_real(d.mu_bar), format_real(d.a), format_real(d.gamma),
             format_real(d.gamma_prime), format_real(d.two_star),
             format_real(d.two_star_alpha), format_real(d.two_lower_alpha),
             format_real(d.hls_constant)}});
  return 0;
}

int cmd_grid_check(const RunConfig& cfg) {
  const RadialGrid grid = ball_grid(cfg);
  std::vector<double> one(grid.M(), 1.0);
  const double vol = grid.integrate(one);
  const double vol_exact =
      sphere_area(grid.N()) * std::pow(grid.R(), grid.N()) / grid.N();
  const double coulomb = grid.kernel_pairing(one, one);
  std::cout << "volume = " << format_real(vol) << " (defect "
            << format_real(std::fabs(vol - vol_exact) / vol_exact) << ")\n"
            << "uniform self-interaction = " << format_real(coulomb) << "\n"
            << "diagonal clipped = " << (grid.diagonal_clipped() ? "yes" : "no")
            << "\n";
  emit_csv(cfg, "grid_check.csv",
           {"volume", "volume_defect", "self_interaction", "diagonal_clipped"},
           {{format_real(vol),
             format_real(std::fabs(vol - vol_exact) / vol_exact),
             format_real(coulomb), grid.diagonal_clipped() ? "1" : "0"}});
  return 0;
}

int cmd_eig(const RunConfig& cfg) {
  const RadialGrid grid = ball_grid(cfg);
  const auto pairs = eigenpairs(grid, cfg.params, cfg.eig_count);
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : pairs) {
    rows.push_back({std::to_string(e.k), format_real(e.lambda_k),
                    format_real(e.residual), std::to_string(e.iterations)});
    std::cout << "lambda_" << e.k << " = " << format_real(e.lambda_k) << "\n";
  }
  emit_csv(cfg, "eigenvalues.csv", {"k", "lambda_k", "residual", "iterations"},
           rows);
  return 0;
}

int cmd_constants(const RunConfig& cfg) {
  const RadialGrid grid = space_grid(cfg);
  const Derived d = derive(cfg.params);
  const ConstantReport s = minimize_constant(
      ConstantName::S, grid, cfg.params, talenti_profile(grid, cfg.params.N));
  const ConstantReport s_mu =
      minimize_constant(ConstantName::S_mu, grid, cfg.params,
                        two_exponent_profile(grid, d));
  const ConstantReport s_ha =
      minimize_constant(ConstantName::S_HA, grid, cfg.params,
                        two_exponent_profile(grid, d));
  const double cpow = std::pow(d.hls_constant, 1.0 / d.two_star_alpha);
  std::cout << "S = " << format_real(s.value) << "\n"
            << "S_mu = " << format_real(s_mu.value) << "\n"
            << "S_HA = " << format_real(s_ha.value) << "\n"
            << "bounds: " << format_real(s_mu.value / cpow)
            << " <= S_HA <= " << format_real(s.value / cpow) << "\n";
  emit_csv(cfg, "constants.csv",
           {"name", "value", "iterations", "grad_norm", "converged"},
           {{"S", format_real(s.value), std::to_string(s.iterations),
             format_real(s.grad_norm), s.converged ? "1" : "0"},
            {"S_mu", format_real(s_mu.value), std::to_string(s_mu.iterations),
             format_real(s_mu.grad_norm), s_mu.converged ? "1" : "0"},
            {"S_HA", format_real(s_ha.value), std::to_string(s_ha.iterations),
             format_real(s_ha.grad_norm), s_ha.converged ? "1" : "0"}});
  return 0;
}

int cmd_extremal(const RunConfig& cfg) {
  const RadialGrid grid = space_grid(cfg);
  const Derived d = derive(cfg.params);
  const ExtremalResult ex = extremal_u_mu(grid, cfg.params);
  const DecayReport dr = verify_decay(grid, ex.u, d);
  std::cout << "S_HA = " << format_real(ex.s_ha) << "\n"
            << "||u||_mu^2 = " << format_real(ex.hnorm_sq) << "\n"
            << "inner slope = " << format_real(dr.inner_slope)
            << " (target " << format_real(-d.gamma_prime) << ")\n"
            << "outer slope = " << format_real(dr.outer_slope) << " (target "
            << format_real(-d.gamma) << ")\n";
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < grid.M(); ++i)
    rows.push_back({format_real(grid.nodes()[i]), format_real(ex.u[i])});
  emit_csv(cfg, "extremal_profile.csv", {"r", "u"}, rows);
  emit_json(cfg, "extremal_report.json",
            {{"s_ha", ex.s_ha},
             {"hnorm_sq", ex.hnorm_sq},
             {"riesz_crit", ex.riesz_crit},
             {"iterations", ex.report.iterations},
             {"converged", ex.report.converged},
             {"inner_slope", dr.inner_slope},
             {"outer_slope", dr.outer_slope},
             {"inner_target", -d.gamma_prime},
             {"outer_target", -d.gamma}});
  return 0;
}

/// Whole-space extremal at a resolution pinned to the scan budget.
ExtremalResult scan_extremal(const RunConfig& cfg, RadialGrid& grid) {
  return extremal_u_mu(grid, [&] {
    Params prm = cfg.params;
    prm.lambda = 0.0;
    prm.R = cfg.truncation_radius;
    return prm;
  }());
}

int cmd_bubble_scan(const RunConfig& cfg) {
  RadialGrid space(GridSpec{cfg.truncation_radius, cfg.grid_M, 3.0},
                   cfg.params.N, cfg.params.alpha, cfg.cache_dir);
  const ExtremalResult ex = scan_extremal(cfg, space);
  RadialProfileTable table(space.nodes(), ex.u.v);
  const RadialGrid ball = ball_grid(cfg);
  const auto rows_s = scan(
      kind_of(cfg.problem), ball, table,
      log_spaced(cfg.scan_eps_lo, cfg.scan_eps_hi, cfg.scan_points), cfg.params,
      CutoffSpec{cfg.cutoff_delta}, ex.s_ha);
  const std::vector<std::string> cols = {
      "epsilon", "hnorm_sq",         "riesz_crit", "l2",        "lq1",
      "riesz_p", "a_term",           "t_fiber",    "max_fiber_energy",
      "c_star_gap"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rows_s) {
    std::vector<std::string> row;
    for (const auto& c : cols) row.push_back(format_real(scan_column(r, c)));
    rows.push_back(std::move(row));
  }
  emit_csv(cfg, "bubble_scan.csv", cols, rows);
  std::cout << "scanned " << rows.size() << " epsilon points; gap at smallest = "
            << format_real(rows_s.front().c_star_gap) << "\n";
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  RadialGrid space(GridSpec{cfg.truncation_radius, cfg.grid_M, 3.0},
                   cfg.params.N, cfg.params.alpha, cfg.cache_dir);
  const ExtremalResult ex = scan_extremal(cfg, space);
  RadialProfileTable table(space.nodes(), ex.u.v);
  const RadialGrid ball = ball_grid(cfg);
  const RadialField seed =
      build_bubble(ball, table, cfg.scan_eps_hi, CutoffSpec{cfg.cutoff_delta});
  const SolveReport rep =
      solve(kind_of(cfg.problem), ball, cfg.params, seed, ex.s_ha);
  std::cout << "level_c = " << format_real(rep.level_c) << "\n"
            << "c_star = " << format_real(rep.c_star) << "\n"
            << "below threshold = " << (rep.below_threshold ? "yes" : "no")
            << "\n"
            << "residual = " << format_real(rep.residual) << " after "
            << rep.iterations << " iterations\n";
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < ball.M(); ++i)
    rows.push_back({format_real(ball.nodes()[i]), format_real(rep.solution[i])});
  emit_csv(cfg, "solution.csv", {"r", "u"}, rows);
  emit_json(cfg, "solve_report.json",
            {{"problem", problem_name(rep.problem)},
             {"level_c", rep.level_c},
             {"c_star", rep.c_star},
             {"below_threshold", rep.below_threshold},
             {"residual", rep.residual},
             {"iterations", rep.iterations},
             {"mp_rho", rep.mp_rho},
             {"mp_t_far", rep.mp_t_far},
             {"path_history", rep.path_history}});
  return 0;
}

int cmd_verify_all(const RunConfig& cfg) {
  AcceptanceOptions opts;
  opts.scale = cfg.scale;
  opts.cache_dir = cfg.cache_dir;
  opts.output_dir = cfg.output_dir;
  opts.seed = cfg.seed;
  const auto results = run_acceptance(opts, &std::cout);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results)
    rows.push_back({std::to_string(r.id), r.name, r.pass ? "pass" : "fail",
                    format_real(r.seconds), r.detail});
  emit_csv(cfg, "acceptance.csv", {"id", "name", "status", "seconds", "detail"},
           rows);
  g_emitted.push_back("det1/eigenvalues.csv");
  g_emitted.push_back("det1/bubble_scan.csv");
  g_emitted.push_back("det2/eigenvalues.csv");
  g_emitted.push_back("det2/bubble_scan.csv");
  return all_passed(results) ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::strcmp(argv[1], "--help") == 0 ||
      std::strcmp(argv[1], "-h") == 0) {
    std::cout << kUsage;
    return argc < 2 ? 2 : 0;
  }
  try {
    std::map<std::string, std::string> file_values, overrides;
    overrides["command"] = argv[1];
    for (int i = 2; i < argc; ++i) {
      std::string key = argv[i];
      if (key.rfind("--", 0) != 0 || i + 1 >= argc) {
        std::cerr << "expected --key value pairs after the command\n";
        return 2;
      }
      key = key.substr(2);
      const std::string value = argv[++i];
      if (key == "config")
        file_values = parse_config_file(value);
      else
        overrides[key] = value;
    }
    const RunConfig cfg = resolve_config(file_values, overrides);
    validate(cfg.params);

    int rc = 2;
    if (cfg.command == "derive") rc = cmd_derive(cfg);
    else if (cfg.command == "grid-check") rc = cmd_grid_check(cfg);
    else if (cfg.command == "eig") rc = cmd_eig(cfg);
    else if (cfg.command == "constants") rc = cmd_constants(cfg);
    else if (cfg.command == "extremal") rc = cmd_extremal(cfg);
    else if (cfg.command == "bubble-scan") rc = cmd_bubble_scan(cfg);
    else if (cfg.command == "solve") rc = cmd_solve(cfg);
    else if (cfg.command == "verify-all") rc = cmd_verify_all(cfg);
    else {
      std::cerr << "unknown command: " << cfg.command << "\n" << kUsage;
      return 2;
    }
    if (!g_emitted.empty())
      write_manifest(cfg.output_dir, g_emitted, cfg.echo());
    return rc;
  } catch (const choquard::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const choquard::SolveFailure& e) {
    std::cerr << "solve failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
