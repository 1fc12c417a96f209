// Regularized Gauss-Newton (Levenberg-Marquardt) iteration over the flow
// field and the mesh coordinates, with backtracking that keeps every
// accepted iterate valid, admissible and strictly better.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "lsmdg/assembly.hpp"
#include "lsmdg/banded.hpp"

namespace lsmdg {

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double lambda_u = 0.0;
  double step_scale = 0.0;  // 0 when the step was rejected
  double min_jacobian = 0.0;
};

struct SolverConfig {
  double lambda_y = 0.0;
  double lambda_sigma = 0.0;
  double lambda_u = 1e-2;
  double lambda_laplacian = 0.0;
  /// Scale the Laplacian weight by the current lambda_u over its initial
  /// value, so it stiffens and relaxes together with the identity term.
  bool adapt_laplacian = false;
  bool inverse_volume_scaling = false;

  bool adapt_lambda_u = true;
  double lambda_u_increase = 10.0;
  double lambda_u_decrease = 0.5;
  double lambda_u_floor = 1e-12;
  double lambda_u_ceiling = 1e12;
  /// Gain ratios (actual over predicted decrease) above which lambda_u is
  /// relaxed and below which it is tightened.
  double gain_relax = 0.75;
  double gain_tighten = 0.25;

  int max_iters = 500;
  double abs_tol = 1e-12;  // on |J^T r|
  double rel_tol = 1e-10;  // on |J^T r| relative to the first iterate
  /// Extra iterations taken once the gradient test passes. They act as
  /// iterative refinement against round-off in the normal equations and stop
  /// as soon as a step fails to cut the objective by polish_ratio.
  int polish_iters = 5;
  double polish_ratio = 1e-2;
  /// A rejected step right after an accepted one that cut the objective by
  /// less than this fraction counts as round-off stagnation, not a stall.
  double stagnation_rtol = 1e-3;

  double backtrack_factor = 0.5;
  int max_halvings = 30;

  /// Called after every iteration when set.
  std::function<void(const IterationRecord&)> on_iteration;

  /// Throws ConfigError for negative weights or non-positive tolerances.
  void validate(bool moving) const;
};

struct SolveReport {
  int iterations = 0;
  double final_objective = 0.0;
  double final_gradient_norm = 0.0;
  std::vector<double> objective_history;  // initial value, then every accepted step
  std::vector<IterationRecord> records;
  int rejections = 0;
  double min_jacobian = 0.0;  // final validity margin
  bool converged = false;
  bool stalled = false;
};

struct SolveResult {
  FieldState state;
  GeometryField geometry;
  SolveReport report;
};

/// Outcome of evaluating a trial step alpha * delta.
struct StepTrial {
  bool valid = false;  // geometry valid and state admissible
  double objective = 0.0;
};

struct DampResult {
  bool accepted = false;
  double alpha = 0.0;
  int halvings = 0;
  double objective = 0.0;
};

/// Largest alpha in {1, f, f^2, ...} (at most max_halvings reductions) whose
/// trial is valid and strictly below current_objective.
DampResult damp_step(const std::function<StepTrial(double)>& trial, double current_objective,
                     double factor = 0.5, int max_halvings = 30);

/// Regularization R added to J^T J: lambda_y / lambda_sigma / lambda_u on the
/// diagonal blocks (lambda_u optionally divided by the adjacent cell volume)
/// plus lambda_laplacian times the geometry stiffness matrix restricted to
/// the interior geometry dofs.
void add_regularization(const Discretization& disc, const GeometryField& g, const DofMap& map,
                        const SolverConfig& cfg, double lambda_u, BandedSpdMatrix& A);

/// Half bandwidth needed by the regularization.
int regularization_bandwidth(const Discretization& disc, const DofMap& map,
                             const SolverConfig& cfg);

SolveResult gauss_newton_solve(const Discretization& disc, const GeometryField& g0,
                               const FieldState& s0, const SolverConfig& cfg, bool moving);

}  // namespace lsmdg
