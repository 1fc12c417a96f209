// Drivers for the one-dimensional experiments: boundary layer, viscous
// Burgers shock and Navier-Stokes viscous shock. Shared by the command line
// tool and the tests.
#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lsmdg/assembly.hpp"
#include "lsmdg/oracles.hpp"
#include "lsmdg/solver.hpp"

namespace lsmdg {

struct RunResult {
  std::shared_ptr<const Discretization> disc;
  FieldState state;
  GeometryField geometry;
  SolveReport report;
};

struct ConvergenceRow {
  std::string case_name;
  int p;
  int cells;
  double h;
  double error;
  double rate;  // NaN on the first row of a sequence
};

/// Solver settings for refinement studies: the objective on fine moving grids
/// falls far below the default absolute tolerance.
SolverConfig convergence_study_config();
/// Solver settings for the Burgers shock: a Laplacian term that follows
/// lambda_u keeps the boundary cells from folding early in the solve and
/// fades once steps are accepted with a good gain.
SolverConfig burgers_shock_config();
/// Solver settings for the Navier-Stokes shock: fixed geometry damping plus a
/// Laplacian term that keeps cells from collapsing on the way to the optimum.
SolverConfig ns_shock_config();

/// Fills in the rate column from consecutive rows.
void fill_rates(std::vector<ConvergenceRow>& rows);

// Boundary layer: eps y'' = y' on (0, 1), y(0) = 0, y(1) = 1, eps = 1/Pe.
Problem boundary_layer_problem(double peclet);
/// Started from the linear interpolant of the boundary data on a uniform grid.
RunResult run_boundary_layer(double peclet, int degree, int cells, bool moving,
                             const SolverConfig& cfg);
double boundary_layer_error(const RunResult& run, double peclet);
/// Moving levels with twice the cells of the previous level start from the
/// bisected previous solution.
std::vector<ConvergenceRow> boundary_layer_convergence(double peclet, int degree,
                                                       const std::vector<int>& cells,
                                                       bool moving, const SolverConfig& cfg);

struct InterfacePosition {
  double peclet;
  int degree;
  double x_eps;
  SolveReport report;
};
/// Two moving isoparametric cells; x_eps is the interior vertex.
InterfacePosition boundary_layer_interface(double peclet, int degree, const SolverConfig& cfg);

// Stationary viscous Burgers shock on (-1/2, 1/2) with y(-1/2) = y_L,
// y(1/2) = -y_L.
Problem burgers_problem(double viscosity, double y_left);
/// Started from the piecewise-constant end states split at x = 0.
RunResult run_burgers(double viscosity, double y_left, int degree, int cells, bool moving,
                      const SolverConfig& cfg);
double burgers_error(const RunResult& run, double viscosity, double y_left);
/// Every level starts from the split initial state.
std::vector<ConvergenceRow> burgers_convergence(double viscosity, double y_left, int degree,
                                                const std::vector<int>& cells, bool moving,
                                                const SolverConfig& cfg);
/// L2 projection of the exact solution on uniform grids.
std::vector<ConvergenceRow> burgers_projection_convergence(double viscosity, double y_left,
                                                           int degree,
                                                           const std::vector<int>& cells);

// Navier-Stokes viscous shock on (-1, 1) between the normal-shock states.
Problem ns_shock_problem(const NavierStokesParameters& params);
/// Started from the piecewise-constant end states split at x = 0.
RunResult run_ns_shock(const NavierStokesParameters& params, int degree, int cells,
                       const SolverConfig& cfg);

struct ShockComparison {
  ShiftAlignment alignment;
  double relative_density_error;  // aligned max error over the max oracle density
  double endpoint_defect;         // Rankine-Hugoniot defect of the boundary traces
};
ShockComparison compare_ns_shock(const RunResult& run, const ShockProfile& oracle);

/// Samples of y (optionally transformed) at `per_cell` points of each cell.
/// Header "cell_id,xi,x," followed by `names`.
void write_solution_csv(std::ostream& out, const RunResult& run,
                        const std::vector<std::string>& names, int per_cell = 11,
                        const std::function<Vec(const Vec&)>& transform = {});

}  // namespace lsmdg
