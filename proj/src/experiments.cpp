#include "lsmdg/experiments.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "lsmdg/csv.hpp"

namespace lsmdg {

SolverConfig convergence_study_config() {
  SolverConfig cfg;
  cfg.abs_tol = 1e-20;
  cfg.max_iters = 5000;
  return cfg;
}

SolverConfig burgers_shock_config() {
  SolverConfig cfg;
  cfg.lambda_laplacian = 1.0;
  cfg.adapt_laplacian = true;
  cfg.max_iters = 5000;
  return cfg;
}

SolverConfig ns_shock_config() {
  SolverConfig cfg;
  cfg.lambda_u = 0.1;
  cfg.adapt_lambda_u = false;
  cfg.lambda_laplacian = 1e-2;
  cfg.max_iters = 5000;
  return cfg;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate = std::numeric_limits<double>::quiet_NaN();
    if (i == 0 || rows[i - 1].case_name != rows[i].case_name || rows[i - 1].p != rows[i].p) continue;
    if (rows[i].error > 0.0 && rows[i - 1].error > 0.0)
      rows[i].rate = std::log(rows[i - 1].error / rows[i].error) / std::log(rows[i - 1].h / rows[i].h);
  }
}

namespace {

DiscretizationOptions isoparametric(int degree) {
  DiscretizationOptions options;
  options.degree_y = degree;
  return options;
}

// Cellwise constant state chosen by the sign of the cell centroid.
FieldState split_state(const Discretization& disc, const GeometryField& g, const Vec& left,
                       const Vec& right) {
  FieldState s = disc.zero_state();
  for (int c = 0; c < disc.cell_count(); ++c) {
    const double centroid = g.evaluate_mapping(c, 0.5).x;
    const Vec& y = centroid < 0.0 ? left : right;
    // The first modal function is the constant 1.
    for (int k = 0; k < disc.components(); ++k) s.y_coeff(c, k, 0) = y[k];
  }
  return s;
}

RunResult solve(std::shared_ptr<const Discretization> disc, const GeometryField& g,
                const FieldState& s, const SolverConfig& cfg, bool moving) {
  SolveResult r = gauss_newton_solve(*disc, g, s, cfg, moving);
  return RunResult{std::move(disc), std::move(r.state), std::move(r.geometry), std::move(r.report)};
}

// Refinement sequence on moving grids: a level with twice the cells of the
// previous one starts from the bisected previous solution, so it begins at
// the coarse optimum instead of the uniform initial guess.
std::vector<RunResult> refinement_runs(
    const Problem& problem, int degree, const std::vector<int>& cells, bool moving,
    const SolverConfig& cfg, const std::function<RunResult(int)>& fresh) {
  std::vector<RunResult> runs;
  for (int n : cells) {
    if (moving && !runs.empty() && n == 2 * runs.back().disc->cell_count()) {
      const RunResult& prev = runs.back();
      auto disc = std::make_shared<const Discretization>(problem, n, isoparametric(degree));
      auto [s, g] = bisect_cells(*prev.disc, prev.state, prev.geometry, *disc);
      runs.push_back(solve(disc, g, s, cfg, true));
    } else {
      runs.push_back(fresh(n));
    }
  }
  return runs;
}

}  // namespace

Problem boundary_layer_problem(double peclet) {
  Problem problem;
  problem.model = std::make_shared<AdvectionDiffusionModel>(1.0, 1.0 / peclet);
  problem.left = {BoundaryKind::dirichlet, {0.0, 0.0, 0.0}};
  problem.right = {BoundaryKind::dirichlet, {1.0, 0.0, 0.0}};
  return problem;
}

RunResult run_boundary_layer(double peclet, int degree, int cells, bool moving,
                             const SolverConfig& cfg) {
  auto disc = std::make_shared<const Discretization>(boundary_layer_problem(peclet), cells,
                                                     isoparametric(degree));
  const GeometryField g = disc->uniform_geometry(0.0, 1.0);
  const FieldState s = l2_project(*disc, g, [](double x) { return Vec{x, 0.0, 0.0}; });
  return solve(disc, g, s, cfg, moving);
}

double boundary_layer_error(const RunResult& run, double peclet) {
  return l2_error(*run.disc, run.state, run.geometry,
                  [peclet](double x) { return Vec{boundary_layer_exact(peclet, x), 0.0, 0.0}; });
}

std::vector<ConvergenceRow> boundary_layer_convergence(double peclet, int degree,
                                                       const std::vector<int>& cells,
                                                       bool moving, const SolverConfig& cfg) {
  std::vector<ConvergenceRow> rows;
  const std::string name = moving ? "boundary_layer_moving" : "boundary_layer_static";
  const auto runs = refinement_runs(boundary_layer_problem(peclet), degree, cells, moving, cfg,
                                    [&](int n) { return run_boundary_layer(peclet, degree, n, moving, cfg); });
  for (const RunResult& run : runs) {
    const int n = run.disc->cell_count();
    rows.push_back({name, degree, n, 1.0 / n, boundary_layer_error(run, peclet), 0.0});
  }
  fill_rates(rows);
  return rows;
}

InterfacePosition boundary_layer_interface(double peclet, int degree, const SolverConfig& cfg) {
  const RunResult run = run_boundary_layer(peclet, degree, 2, true, cfg);
  return {peclet, degree, run.geometry.vertex(1), run.report};
}

Problem burgers_problem(double viscosity, double y_left) {
  Problem problem;
  problem.model = std::make_shared<BurgersModel>(viscosity);
  problem.left = {BoundaryKind::dirichlet, {y_left, 0.0, 0.0}};
  problem.right = {BoundaryKind::dirichlet, {-y_left, 0.0, 0.0}};
  return problem;
}

RunResult run_burgers(double viscosity, double y_left, int degree, int cells, bool moving,
                      const SolverConfig& cfg) {
  auto disc = std::make_shared<const Discretization>(burgers_problem(viscosity, y_left), cells,
                                                     isoparametric(degree));
  const GeometryField g = disc->uniform_geometry(-0.5, 0.5);
  const FieldState s = split_state(*disc, g, {y_left, 0.0, 0.0}, {-y_left, 0.0, 0.0});
  return solve(disc, g, s, cfg, moving);
}

double burgers_error(const RunResult& run, double viscosity, double y_left) {
  return l2_error(*run.disc, run.state, run.geometry, [=](double x) {
    return Vec{burgers_exact(viscosity, y_left, x), 0.0, 0.0};
  });
}

std::vector<ConvergenceRow> burgers_convergence(double viscosity, double y_left, int degree,
                                                const std::vector<int>& cells, bool moving,
                                                const SolverConfig& cfg) {
  std::vector<ConvergenceRow> rows;
  const std::string name = moving ? "burgers_moving" : "burgers_static";
  for (int n : cells) {
    const RunResult run = run_burgers(viscosity, y_left, degree, n, moving, cfg);
    rows.push_back({name, degree, n, 1.0 / n, burgers_error(run, viscosity, y_left), 0.0});
  }
  fill_rates(rows);
  return rows;
}

std::vector<ConvergenceRow> burgers_projection_convergence(double viscosity, double y_left,
                                                           int degree,
                                                           const std::vector<int>& cells) {
  std::vector<ConvergenceRow> rows;
  const ExactSolution exact = [=](double x) {
    return Vec{burgers_exact(viscosity, y_left, x), 0.0, 0.0};
  };
  for (int n : cells) {
    const Discretization disc(burgers_problem(viscosity, y_left), n, isoparametric(degree));
    const GeometryField g = disc.uniform_geometry(-0.5, 0.5);
    const FieldState s = l2_project(disc, g, exact);
    rows.push_back({"burgers_projection", degree, n, 1.0 / n, l2_error(disc, s, g, exact), 0.0});
  }
  fill_rates(rows);
  return rows;
}

Problem ns_shock_problem(const NavierStokesParameters& params) {
  auto model = std::make_shared<NavierStokes1DModel>(params);
  const ShockState down = normal_shock_downstream(params);
  Problem problem;
  problem.left = {BoundaryKind::dirichlet, model->conservative(1.0, params.mach, 1.0)};
  problem.right = {BoundaryKind::dirichlet,
                   model->conservative(down.rho, down.v, down.temperature)};
  problem.model = std::move(model);
  return problem;
}

RunResult run_ns_shock(const NavierStokesParameters& params, int degree, int cells,
                       const SolverConfig& cfg) {
  auto disc = std::make_shared<const Discretization>(ns_shock_problem(params), cells,
                                                     isoparametric(degree));
  const GeometryField g = disc->uniform_geometry(-1.0, 1.0);
  const Problem& problem = disc->problem();
  const FieldState s = split_state(*disc, g, problem.left.state, problem.right.state);
  return solve(disc, g, s, cfg, true);
}

ShockComparison compare_ns_shock(const RunResult& run, const ShockProfile& oracle) {
  const Discretization& disc = *run.disc;
  std::vector<double> samples;
  std::vector<double> density;
  const int per_cell = 40;
  for (int c = 0; c < disc.cell_count(); ++c)
    for (int i = 0; i < per_cell; ++i) {
      const double xi = (i + 0.5) / per_cell;
      samples.push_back(run.geometry.evaluate_mapping(c, xi).x);
      density.push_back(evaluate_state(disc, run.state, c, xi)[0]);
    }
  ShockComparison out;
  out.alignment = align_shift(samples, density,
                              [&](double x) { return oracle.density(x); }, -1.0, 1.0);
  double peak = 0.0;
  for (double r : {oracle.upstream().rho, oracle.downstream().rho}) peak = std::max(peak, r);
  out.relative_density_error = out.alignment.error / peak;

  const Vec left = evaluate_state(disc, run.state, 0, 0.0);
  const Vec right = evaluate_state(disc, run.state, disc.cell_count() - 1, 1.0);
  const Vec defect = rankine_hugoniot_defect(disc.model(), left, right);
  double norm = 0.0;
  for (int k = 0; k < disc.components(); ++k) norm += defect[k] * defect[k];
  out.endpoint_defect = std::sqrt(norm);
  return out;
}

void write_solution_csv(std::ostream& out, const RunResult& run,
                        const std::vector<std::string>& names, int per_cell,
                        const std::function<Vec(const Vec&)>& transform) {
  std::vector<std::string> header{"cell_id", "xi", "x"};
  header.insert(header.end(), names.begin(), names.end());
  CsvWriter csv(out, header);
  const Discretization& disc = *run.disc;
  for (int c = 0; c < disc.cell_count(); ++c)
    for (int i = 0; i < per_cell; ++i) {
      const double xi = per_cell == 1 ? 0.5 : static_cast<double>(i) / (per_cell - 1);
      const double x = run.geometry.evaluate_mapping(c, xi).x;
      Vec y = evaluate_state(disc, run.state, c, xi);
      if (transform) y = transform(y);
      out << c << ',' << xi << ',' << x;
      for (std::size_t k = 0; k < names.size(); ++k) out << ',' << y[k];
      out << '\n';
    }
}

}  // namespace lsmdg
