#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "choquard/acceptance.hpp"
#include "choquard/bubbles.hpp"
#include "choquard/extremals.hpp"
#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/params.hpp"
#include "choquard/solver.hpp"
#include "choquard/spectral.hpp"

#include <iostream>
#include <optional>

namespace py = pybind11;
using namespace choquard;

namespace {

RadialField to_field(const std::vector<double>& v) {
  RadialField f;
  f.v = v;
  return f;
}

Params make_params(int N, double alpha, double mu, double lambda,
                   std::optional<double> q, std::optional<double> p, double R) {
  Params prm;
  prm.N = N;
  prm.alpha = alpha;
  prm.mu = mu;
  prm.lambda = lambda;
  prm.q = q;
  prm.p = p;
  prm.R = R;
  return prm;
}

} // namespace

PYBIND11_MODULE(_choquard, m) {
  m.doc() = "radial variational toolkit for the Hardy-Choquard problem family";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<SolveFailure>(m, "SolveFailure");

  py::class_<Params>(m, "Params")
      .def(py::init(&make_params), py::arg("N") = 3, py::arg("alpha") = 1.0,
           py::arg("mu") = 0.0, py::arg("lambda_") = 0.0,
           py::arg("q") = std::nullopt, py::arg("p") = std::nullopt,
           py::arg("R") = 1.0)
      .def_readwrite("N", &Params::N)
      .def_readwrite("alpha", &Params::alpha)
      .def_readwrite("mu", &Params::mu)
      .def_readwrite("lambda_", &Params::lambda)
      .def_readwrite("q", &Params::q)
      .def_readwrite("p", &Params::p)
      .def_readwrite("R", &Params::R);

  py::class_<Derived>(m, "Derived")
      .def_readonly("mu_bar", &Derived::mu_bar)
      .def_readonly("a", &Derived::a)
      .def_readonly("gamma", &Derived::gamma)
      .def_readonly("gamma_prime", &Derived::gamma_prime)
      .def_readonly("two_star", &Derived::two_star)
      .def_readonly("two_star_alpha", &Derived::two_star_alpha)
      .def_readonly("two_lower_alpha", &Derived::two_lower_alpha)
      .def_readonly("hls_constant", &Derived::hls_constant);

  m.def("validate", &validate, py::arg("params"));
  m.def("derive", &derive, py::arg("params"));
  m.def("hls_constant", &hls_constant, py::arg("N"), py::arg("alpha"));
  m.def("critical_level", &critical_level, py::arg("s_ha"), py::arg("derived"));
  m.def("sphere_area", &sphere_area, py::arg("n"));

  py::class_<RadialGrid>(m, "RadialGrid")
      .def(py::init([](double R, int M, double beta, int N, double alpha,
                       const std::string& cache_dir) {
             return RadialGrid(GridSpec{R, M, beta}, N, alpha, cache_dir);
           }),
           py::arg("R"), py::arg("M"), py::arg("beta"), py::arg("N"),
           py::arg("alpha"), py::arg("cache_dir") = "")
      .def_property_readonly("M", &RadialGrid::M)
      .def_property_readonly("N", &RadialGrid::N)
      .def_property_readonly("R", &RadialGrid::R)
      .def_property_readonly("beta", &RadialGrid::beta)
      .def_property_readonly("nodes", &RadialGrid::nodes)
      .def_property_readonly("weights", &RadialGrid::weights)
      .def_property_readonly("diagonal_clipped", &RadialGrid::diagonal_clipped)
      .def("integrate", &RadialGrid::integrate, py::arg("f"))
      .def("kernel", &RadialGrid::kernel, py::arg("i"), py::arg("j"))
      .def("kernel_pairing", &RadialGrid::kernel_pairing, py::arg("f"),
           py::arg("g"));

  py::enum_<ProblemKind>(m, "ProblemKind")
      .value("linear", ProblemKind::Linear)
      .value("superlinear", ProblemKind::Superlinear)
      // "nonlocal" is a python keyword, so the accessible name is riesz
      .value("riesz", ProblemKind::Nonlocal);

  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("dirichlet", &EnergyBreakdown::dirichlet)
      .def_readonly("hardy", &EnergyBreakdown::hardy)
      .def_readonly("hnorm_sq", &EnergyBreakdown::hnorm_sq)
      .def_readonly("riesz_crit", &EnergyBreakdown::riesz_crit)
      .def_readonly("perturbation", &EnergyBreakdown::perturbation)
      .def_readonly("total", &EnergyBreakdown::total);

  m.def(
      "norms",
      [](const RadialGrid& g, const std::vector<double>& u, const Params& prm) {
        return norms(g, to_field(u), prm);
      },
      py::arg("grid"), py::arg("u"), py::arg("params"));
  m.def(
      "energy",
      [](ProblemKind k, const RadialGrid& g, const std::vector<double>& u,
         const Params& prm) { return energy(k, g, to_field(u), prm); },
      py::arg("kind"), py::arg("grid"), py::arg("u"), py::arg("params"));
  m.def(
      "gradient",
      [](ProblemKind k, const RadialGrid& g, const std::vector<double>& u,
         const Params& prm) { return gradient(k, g, to_field(u), prm).v; },
      py::arg("kind"), py::arg("grid"), py::arg("u"), py::arg("params"));
  m.def(
      "fiber_maximize",
      [](ProblemKind k, const RadialGrid& g, const std::vector<double>& u,
         const Params& prm) {
        const FiberMax fm = fiber_maximize(fiber_map(k, g, to_field(u), prm));
        return py::make_tuple(fm.t, fm.value);
      },
      py::arg("kind"), py::arg("grid"), py::arg("u"), py::arg("params"));

  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("k", &EigenResult::k)
      .def_readonly("lambda_k", &EigenResult::lambda_k)
      .def_property_readonly(
          "eigenfield", [](const EigenResult& e) { return e.eigenfield.v; })
      .def_readonly("residual", &EigenResult::residual);

  m.def("eigenpairs", &eigenpairs, py::arg("grid"), py::arg("params"),
        py::arg("count"));
  m.def("lambda1", &lambda1, py::arg("grid"), py::arg("params"));

  py::enum_<ConstantName>(m, "ConstantName")
      .value("S", ConstantName::S)
      .value("S_mu", ConstantName::S_mu)
      .value("S_HA", ConstantName::S_HA)
      .value("S_HA_domain", ConstantName::S_HA_domain);

  py::class_<ConstantReport>(m, "ConstantReport")
      .def_readonly("value", &ConstantReport::value)
      .def_property_readonly(
          "minimizer", [](const ConstantReport& r) { return r.minimizer.v; })
      .def_readonly("iterations", &ConstantReport::iterations)
      .def_readonly("grad_norm", &ConstantReport::grad_norm)
      .def_readonly("converged", &ConstantReport::converged);

  py::class_<ExtremalResult>(m, "ExtremalResult")
      .def_property_readonly("u",
                             [](const ExtremalResult& r) { return r.u.v; })
      .def_readonly("s_ha", &ExtremalResult::s_ha)
      .def_readonly("hnorm_sq", &ExtremalResult::hnorm_sq)
      .def_readonly("riesz_crit", &ExtremalResult::riesz_crit)
      .def_readonly("report", &ExtremalResult::report);

  py::class_<DecayReport>(m, "DecayReport")
      .def_readonly("inner_slope", &DecayReport::inner_slope)
      .def_readonly("outer_slope", &DecayReport::outer_slope)
      .def_readonly("inner_rms", &DecayReport::inner_rms)
      .def_readonly("outer_rms", &DecayReport::outer_rms);

  m.def(
      "talenti_profile",
      [](const RadialGrid& g, int N) { return talenti_profile(g, N).v; },
      py::arg("grid"), py::arg("N"));
  m.def(
      "minimize_constant",
      [](ConstantName name, const RadialGrid& g, const Params& prm,
         const std::vector<double>& init) {
        return minimize_constant(name, g, prm, to_field(init));
      },
      py::arg("name"), py::arg("grid"), py::arg("params"), py::arg("init"));
  m.def("extremal_u_mu",
        [](const RadialGrid& g, const Params& prm) {
          return extremal_u_mu(g, prm);
        },
        py::arg("grid"), py::arg("params"));
  m.def(
      "verify_decay",
      [](const RadialGrid& g, const std::vector<double>& u, const Params& prm) {
        return verify_decay(g, to_field(u), derive(prm));
      },
      py::arg("grid"), py::arg("u"), py::arg("params"));

  py::class_<RadialProfileTable>(m, "RadialProfileTable")
      .def(py::init<const std::vector<double>&, const std::vector<double>&>(),
           py::arg("r"), py::arg("u"))
      .def("__call__", &RadialProfileTable::operator(), py::arg("r"));

  py::class_<ScanRow>(m, "ScanRow")
      .def_readonly("epsilon", &ScanRow::epsilon)
      .def_readonly("hnorm_sq", &ScanRow::hnorm_sq)
      .def_readonly("riesz_crit", &ScanRow::riesz_crit)
      .def_readonly("l2", &ScanRow::l2)
      .def_readonly("lq1", &ScanRow::lq1)
      .def_readonly("riesz_p", &ScanRow::riesz_p)
      .def_readonly("a_term", &ScanRow::a_term)
      .def_readonly("t_fiber", &ScanRow::t_fiber)
      .def_readonly("max_fiber_energy", &ScanRow::max_fiber_energy)
      .def_readonly("c_star_gap", &ScanRow::c_star_gap);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r2", &RateFit::r2);

  m.def(
      "build_bubble",
      [](const RadialGrid& g, const RadialProfileTable& t, double eps,
         double delta) {
        return build_bubble(g, t, eps, CutoffSpec{delta}).v;
      },
      py::arg("grid"), py::arg("table"), py::arg("epsilon"),
      py::arg("delta") = 0.125);
  m.def(
      "scan",
      [](ProblemKind k, const RadialGrid& g, const RadialProfileTable& t,
         const std::vector<double>& eps, const Params& prm, double delta,
         double s_ha) {
        return scan(k, g, t, eps, prm, CutoffSpec{delta}, s_ha);
      },
      py::arg("kind"), py::arg("grid"), py::arg("table"), py::arg("eps_list"),
      py::arg("params"), py::arg("delta"), py::arg("s_ha"));
  m.def("log_spaced", &log_spaced, py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def(
      "fit_rate",
      [](const std::vector<ScanRow>& rows, const std::string& column,
         double reference) { return fit_rate(rows, column, reference); },
      py::arg("rows"), py::arg("column"), py::arg("reference") = 0.0);
  m.def(
      "find_lambda0",
      [](ProblemKind k, const RadialGrid& g, const RadialProfileTable& t,
         const Params& prm, double delta, double s_ha, double eps) {
        return find_lambda0(k, g, t, prm, CutoffSpec{delta}, s_ha, eps);
      },
      py::arg("kind"), py::arg("grid"), py::arg("table"), py::arg("params"),
      py::arg("delta"), py::arg("s_ha"), py::arg("epsilon"));

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("solution",
                             [](const SolveReport& r) { return r.solution.v; })
      .def_readonly("level_c", &SolveReport::level_c)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("c_star", &SolveReport::c_star)
      .def_readonly("below_threshold", &SolveReport::below_threshold)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("path_history", &SolveReport::path_history);

  m.def(
      "solve",
      [](ProblemKind k, const RadialGrid& g, const Params& prm,
         const std::vector<double>& seed, double s_ha) {
        return solve(k, g, prm, to_field(seed), s_ha);
      },
      py::arg("kind"), py::arg("grid"), py::arg("params"), py::arg("seed"),
      py::arg("s_ha"));
  m.def(
      "verify_weak_form",
      [](const RadialGrid& g, const std::vector<double>& u, ProblemKind k,
         const Params& prm, int trials, unsigned seed) {
        return verify_weak_form(g, to_field(u), k, prm, trials, seed);
      },
      py::arg("grid"), py::arg("u"), py::arg("kind"), py::arg("params"),
      py::arg("trials") = 20, py::arg("seed") = 1u);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("id", &CheckResult::id)
      .def_readonly("name", &CheckResult::name)
      .def_readonly("pass_", &CheckResult::pass)
      .def_readonly("detail", &CheckResult::detail)
      .def_readonly("seconds", &CheckResult::seconds);

  m.def(
      "run_acceptance",
      [](const std::string& scale, const std::string& cache_dir,
         const std::string& output_dir, unsigned seed, bool verbose) {
        AcceptanceOptions opts;
        opts.scale = scale;
        opts.cache_dir = cache_dir;
        opts.output_dir = output_dir;
        opts.seed = seed;
        return run_acceptance(opts, verbose ? &std::cerr : nullptr);
      },
      py::arg("scale") = "quick", py::arg("cache_dir") = ".kernel-cache",
      py::arg("output_dir") = "out", py::arg("seed") = 1u,
      py::arg("verbose") = false);
}
