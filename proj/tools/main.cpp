// Command line driver for the one-dimensional experiments.
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "lsmdg/csv.hpp"
#include "lsmdg/errors.hpp"
#include "lsmdg/experiments.hpp"
#include "lsmdg/ode_study.hpp"

namespace {

using namespace lsmdg;

constexpr int kExitConfig = 2;
constexpr int kExitStall = 3;
constexpr int kExitOracle = 4;

struct CommonOptions {
  std::string csv_dir = ".";
  std::string log_level = "info";
  bool iteration_log = false;
  std::string config_file;
};

// CLI11 only reads config files on the top-level app, so the file named by a
// subcommand's --config is turned into options placed ahead of the command
// line ones. Keys also given on the command line are skipped. Returns the
// arguments in the reversed order App::parse expects.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string file;
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      at = i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      at = i;
    }
  }
  if (!file.empty()) {
    auto given = [&](const std::string& key) {
      for (const auto& a : args)
        if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
      return false;
    };
    std::vector<std::string> extra;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(file)) {
      const std::string key = item.fullname();
      if (given(key)) continue;
      if (item.inputs.size() == 1) {
        extra.push_back("--" + key + "=" + item.inputs.front());
      } else {
        extra.push_back("--" + key);
        extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
      }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  }
  std::reverse(args.begin(), args.end());
  return args;
}

struct SolverOptions {
  SolverConfig cfg;
  bool fixed_lambda_u = false;
};

void add_common(CLI::App* sub, CommonOptions& common) {
  // Read before parsing by expand_config; registered here for --help.
  sub->add_option("--config", common.config_file,
                  "Flat key=value file; keys are option names without dashes");
  sub->add_option("--csv-dir", common.csv_dir, "Output directory for CSV files");
  sub->add_option("--log-level", common.log_level, "Log level")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
}

void add_solver(CLI::App* sub, SolverOptions& s, CommonOptions& common) {
  auto& c = s.cfg;
  sub->add_option("--lambda-y", c.lambda_y, "Identity regularization on y")->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda-sigma", c.lambda_sigma, "Identity regularization on sigma")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda-u", c.lambda_u, "Initial identity regularization on the geometry")
      ->check(CLI::PositiveNumber);
  sub->add_option("--lambda-laplacian", c.lambda_laplacian, "Geometry Laplacian regularization")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("--adapt-laplacian", c.adapt_laplacian,
                "Scale the Laplacian weight with lambda_u");
  sub->add_flag("--inverse-volume", c.inverse_volume_scaling,
                "Scale lambda_u by the inverse cell volume");
  sub->add_flag("--fixed-lambda-u", s.fixed_lambda_u, "Disable lambda_u adaptation");
  sub->add_option("--max-iters", c.max_iters, "Gauss-Newton iteration limit")->check(CLI::NonNegativeNumber);
  sub->add_option("--abs-tol", c.abs_tol, "Absolute tolerance on |J^T r|")->check(CLI::PositiveNumber);
  sub->add_option("--rel-tol", c.rel_tol, "Tolerance on |J^T r| relative to the first iterate")
      ->check(CLI::PositiveNumber);
  sub->add_option("--polish-iters", c.polish_iters, "Refinement iterations after the gradient test passes")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("--iteration-log", common.iteration_log, "Write iterations.csv");
}

std::vector<IterationRecord> g_iterations;

// Starts from an experiment preset and applies only the options that were
// given on the command line or in a config file.
SolverConfig finish_solver(const CLI::App* sub, const SolverOptions& s,
                           const SolverConfig& preset = {}) {
  SolverConfig cfg = preset;
  const SolverConfig& given = s.cfg;
  auto set = [&](const char* name, auto field) {
    if (sub->count(name) > 0) cfg.*field = given.*field;
  };
  set("--lambda-y", &SolverConfig::lambda_y);
  set("--lambda-sigma", &SolverConfig::lambda_sigma);
  set("--lambda-u", &SolverConfig::lambda_u);
  set("--lambda-laplacian", &SolverConfig::lambda_laplacian);
  set("--inverse-volume", &SolverConfig::inverse_volume_scaling);
  set("--adapt-laplacian", &SolverConfig::adapt_laplacian);
  set("--max-iters", &SolverConfig::max_iters);
  set("--abs-tol", &SolverConfig::abs_tol);
  set("--rel-tol", &SolverConfig::rel_tol);
  set("--polish-iters", &SolverConfig::polish_iters);
  if (s.fixed_lambda_u) cfg.adapt_lambda_u = false;
  cfg.on_iteration = [](const IterationRecord& r) {
    g_iterations.push_back(r);
    spdlog::debug("iter={} objective={:.6e} grad_norm={:.6e} lambda_u={:.3e} step_scale={} "
                  "min_jacobian={:.6e}",
                  r.iter, r.objective, r.grad_norm, r.lambda_u, r.step_scale, r.min_jacobian);
  };
  return cfg;
}

void write_iterations(const CommonOptions& common) {
  if (!common.iteration_log) return;
  auto out = open_csv(common.csv_dir, "iterations.csv");
  CsvWriter csv(out, {"iter", "objective", "grad_norm", "lambda_u", "step_scale", "min_jacobian"});
  for (const auto& r : g_iterations)
    csv.row(r.iter, r.objective, r.grad_norm, r.lambda_u, r.step_scale, r.min_jacobian);
}

void write_mesh(const CommonOptions& common, const GeometryField& g) {
  auto out = open_csv(common.csv_dir, "mesh.csv");
  write_geometry_csv(out, g);
}

void write_convergence(const CommonOptions& common, const std::vector<ConvergenceRow>& rows) {
  auto out = open_csv(common.csv_dir, "convergence.csv");
  CsvWriter csv(out, {"case", "p", "cells", "h", "l2_error", "rate"});
  for (const auto& r : rows) csv.row(r.case_name, r.p, r.cells, r.h, r.error, r.rate);
}

// Logs a solve and reports whether it stalled.
bool check_report(const std::string& what, const SolveReport& report) {
  spdlog::info("{}: iterations={} objective={:.6e} grad_norm={:.6e} converged={}", what,
               report.iterations, report.final_objective, report.final_gradient_norm,
               report.converged);
  if (!report.converged) spdlog::warn("{}: solver did not converge", what);
  return !report.converged;
}

std::vector<int> doubling(int coarsest, int levels) {
  std::vector<int> cells;
  for (int l = 0; l < levels; ++l) cells.push_back(coarsest << l);
  return cells;
}

// ode-study ------------------------------------------------------------------

struct OdeArgs {
  int p = 2;
  int cells = 2;
  int levels = 9;
  std::string formulation = "all";
};

int run_ode(const CommonOptions& common, const OdeArgs& a) {
  OdeStudyConfig cfg;
  cfg.degree = a.p;
  cfg.coarsest_cells = a.cells;
  cfg.levels = a.levels;
  if (a.formulation != "all") cfg.formulations = {parse_formulation(a.formulation)};
  const OdeStudyResult result = run_ode_study(cfg);
  auto out = open_csv(common.csv_dir, "ode_study.csv");
  CsvWriter csv(out, {"formulation", "cells", "h", "error", "rate"});
  for (const auto& r : result.rows)
    csv.row(formulation_name(r.formulation), r.cells, r.h, r.error, r.rate);
  for (Formulation f : cfg.formulations)
    spdlog::info("{}: asymptotic rate {:.4f}", formulation_name(f), asymptotic_rate(result, f));
  if (std::isfinite(result.max_coefficient_difference))
    spdlog::info("reduced_order vs trial_to_test coefficient difference {:.3e}",
                 result.max_coefficient_difference);
  return 0;
}

// boundary-layer -------------------------------------------------------------

struct BoundaryLayerArgs {
  std::string mode = "solve";
  std::vector<double> peclet{10.0};
  std::vector<int> degrees{2};
  int cells = 8;
  int levels = 8;
  bool static_grid = false;
};

int run_bl(const CLI::App* sub, const CommonOptions& common, const SolverOptions& so,
           const BoundaryLayerArgs& a) {
  const SolverConfig cfg =
      finish_solver(sub, so, a.mode == "convergence" ? convergence_study_config() : SolverConfig{});
  bool stalled = false;
  if (a.mode == "interface") {
    auto out = open_csv(common.csv_dir, "interface_positions.csv");
    CsvWriter csv(out, {"Pe", "p", "x_eps"});
    for (double pe : a.peclet)
      for (int p : a.degrees) {
        const InterfacePosition pos = boundary_layer_interface(pe, p, cfg);
        stalled |= check_report("Pe=" + std::to_string(pe) + " p=" + std::to_string(p), pos.report);
        csv.row(pe, p, pos.x_eps);
      }
  } else if (a.mode == "convergence") {
    std::vector<ConvergenceRow> rows;
    for (int p : a.degrees) {
      const auto part = boundary_layer_convergence(a.peclet.front(), p, doubling(a.cells, a.levels),
                                                   !a.static_grid, cfg);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    fill_rates(rows);
    write_convergence(common, rows);
  } else {
    const RunResult run =
        run_boundary_layer(a.peclet.front(), a.degrees.front(), a.cells, !a.static_grid, cfg);
    stalled = check_report("boundary layer", run.report);
    spdlog::info("L2 error {:.6e}", boundary_layer_error(run, a.peclet.front()));
    auto out = open_csv(common.csv_dir, "solution.csv");
    write_solution_csv(out, run, {"y"});
    write_mesh(common, run.geometry);
  }
  write_iterations(common);
  return stalled ? kExitStall : 0;
}

// burgers --------------------------------------------------------------------

struct BurgersArgs {
  double eps = 1e-2;
  double y_left = 1.0;
  int p = 2;
  std::vector<int> cells{8};
  bool static_grid = false;
};

int run_burgers_cmd(const CLI::App* sub, const CommonOptions& common, const SolverOptions& so,
                    const BurgersArgs& a) {
  SolverConfig preset = burgers_shock_config();
  if (a.cells.size() > 1) preset.abs_tol = convergence_study_config().abs_tol;
  const SolverConfig cfg = finish_solver(sub, so, preset);
  const RunResult run = run_burgers(a.eps, a.y_left, a.p, a.cells.front(), !a.static_grid, cfg);
  bool stalled = check_report("burgers", run.report);
  spdlog::info("L2 error {:.6e}", burgers_error(run, a.eps, a.y_left));
  {
    auto out = open_csv(common.csv_dir, "solution.csv");
    write_solution_csv(out, run, {"y"});
    write_mesh(common, run.geometry);
  }
  if (a.cells.size() > 1) {
    auto rows = burgers_convergence(a.eps, a.y_left, a.p, a.cells, !a.static_grid, cfg);
    const auto proj = burgers_projection_convergence(a.eps, a.y_left, a.p, a.cells);
    rows.insert(rows.end(), proj.begin(), proj.end());
    fill_rates(rows);
    write_convergence(common, rows);
  }
  write_iterations(common);
  return stalled ? kExitStall : 0;
}

// ns-shock -------------------------------------------------------------------

struct NsArgs {
  NavierStokesParameters params;
  int p = 2;
  int cells = 16;
  double oracle_step = 1e-4;
};

int run_ns(const CLI::App* sub, const CommonOptions& common, const SolverOptions& so,
           const NsArgs& a) {
  const SolverConfig cfg = finish_solver(sub, so, ns_shock_config());
  const ShockProfile oracle = ns_shock_ode_oracle(a.params, a.oracle_step);
  {
    auto out = open_csv(common.csv_dir, "oracle_profile.csv");
    oracle.write_csv(out);
  }
  const RunResult run = run_ns_shock(a.params, a.p, a.cells, cfg);
  const bool stalled = check_report("navier-stokes shock", run.report);
  const auto* model = dynamic_cast<const NavierStokes1DModel*>(&run.disc->model());
  {
    auto out = open_csv(common.csv_dir, "solution.csv");
    write_solution_csv(out, run, {"rho", "v", "T"}, 11,
                       [model](const Vec& y) { return model->primitive(y); });
    write_mesh(common, run.geometry);
  }
  const ShockComparison cmp = compare_ns_shock(run, oracle);
  {
    auto out = open_csv(common.csv_dir, "oracle_comparison.csv");
    CsvWriter csv(out, {"shift", "linf_density_error", "relative_density_error", "endpoint_defect"});
    csv.row(cmp.alignment.shift, cmp.alignment.error, cmp.relative_density_error,
            cmp.endpoint_defect);
  }
  spdlog::info("oracle shift {:.6f}, relative density error {:.4e}, endpoint defect {:.3e}",
               cmp.alignment.shift, cmp.relative_density_error, cmp.endpoint_defect);
  write_iterations(common);
  return stalled ? kExitStall : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares moving discontinuous Galerkin solver for 1D problems"};
  app.require_subcommand(1);

  CommonOptions common;
  SolverOptions solver;

  OdeArgs ode;
  auto* ode_cmd = app.add_subcommand("ode-study", "Static-grid formulation study for y' = f");
  add_common(ode_cmd, common);
  ode_cmd->add_option("--p", ode.p, "Trial degree")->check(CLI::PositiveNumber);
  ode_cmd->add_option("--cells", ode.cells, "Coarsest cell count")->check(CLI::Range(2, 1 << 20));
  ode_cmd->add_option("--levels", ode.levels, "Number of refinement levels")->check(CLI::PositiveNumber);
  ode_cmd->add_option("--formulation", ode.formulation, "Formulation or 'all'")
      ->check(CLI::IsMember({"all", "equal_order", "reduced_order", "trial_to_test"}));

  BoundaryLayerArgs bl;
  auto* bl_cmd = app.add_subcommand("boundary-layer", "Steady advection-diffusion boundary layer");
  add_common(bl_cmd, common);
  add_solver(bl_cmd, solver, common);
  bl_cmd->add_option("--mode", bl.mode, "solve, convergence or interface")
      ->check(CLI::IsMember({"solve", "convergence", "interface"}));
  bl_cmd->add_option("--pe", bl.peclet, "Peclet number(s)")->check(CLI::PositiveNumber);
  bl_cmd->add_option("--p", bl.degrees, "Polynomial degree(s)")->check(CLI::PositiveNumber);
  bl_cmd->add_option("--cells", bl.cells, "Cell count (coarsest for convergence)")
      ->check(CLI::PositiveNumber);
  bl_cmd->add_option("--levels", bl.levels, "Refinement levels for convergence")
      ->check(CLI::PositiveNumber);
  bl_cmd->add_flag("--static", bl.static_grid, "Keep the grid fixed");

  BurgersArgs bu;
  auto* bu_cmd = app.add_subcommand("burgers", "Stationary viscous Burgers shock");
  add_common(bu_cmd, common);
  add_solver(bu_cmd, solver, common);
  bu_cmd->add_option("--eps", bu.eps, "Viscosity")->check(CLI::PositiveNumber);
  bu_cmd->add_option("--yl", bu.y_left, "Left state (right state is its negative)")
      ->check(CLI::PositiveNumber);
  bu_cmd->add_option("--p", bu.p, "Polynomial degree")->check(CLI::PositiveNumber);
  bu_cmd->add_option("--cells", bu.cells, "Cell count(s); several values write convergence.csv")
      ->check(CLI::PositiveNumber);
  bu_cmd->add_flag("--static", bu.static_grid, "Keep the grid fixed");

  NsArgs ns;
  auto* ns_cmd = app.add_subcommand("ns-shock", "Navier-Stokes viscous shock");
  add_common(ns_cmd, common);
  add_solver(ns_cmd, solver, common);
  ns_cmd->add_option("--mach", ns.params.mach, "Upstream Mach number")->check(CLI::Range(1.0001, 100.0));
  ns_cmd->add_option("--re", ns.params.reynolds, "Reynolds number")->check(CLI::PositiveNumber);
  ns_cmd->add_option("--pr", ns.params.prandtl, "Prandtl number")->check(CLI::PositiveNumber);
  ns_cmd->add_option("--p", ns.p, "Polynomial degree")->check(CLI::PositiveNumber);
  ns_cmd->add_option("--cells", ns.cells, "Cell count")->check(CLI::PositiveNumber);
  ns_cmd->add_option("--oracle-step", ns.oracle_step, "RK4 step of the reference profile")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(expand_config(argc, argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  spdlog::set_level(spdlog::level::from_str(common.log_level));
  spdlog::set_pattern("[%l] %v");

  try {
    if (*ode_cmd) return run_ode(common, ode);
    if (*bl_cmd) return run_bl(bl_cmd, common, solver, bl);
    if (*bu_cmd) return run_burgers_cmd(bu_cmd, common, solver, bu);
    if (*ns_cmd) return run_ns(ns_cmd, common, solver, ns);
  } catch (const ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const LinearSolveError& e) {
    spdlog::error("linear solve failed: {}", e.what());
    return kExitConfig;
  } catch (const OracleError& e) {
    spdlog::error("oracle failure: {}", e.what());
    return kExitOracle;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitStall;
  }
  return 0;
}
