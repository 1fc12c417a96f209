// Static-grid study of y' = f on (0, 1) with inflow data at x = 0, comparing
// the equal-order and reduced-order discrete least-squares formulations with
// the least-squares (trial-to-test) formulation.
#pragma once

#include <string>
#include <vector>

#include "lsmdg/assembly.hpp"

namespace lsmdg {

enum class Formulation { equal_order, reduced_order, trial_to_test };

std::string formulation_name(Formulation f);
/// Throws ConfigError for an unknown name.
Formulation parse_formulation(const std::string& name);

struct OdeStudyConfig {
  int degree = 2;
  int coarsest_cells = 2;
  int levels = 9;  // 2 -> 512 cells by doubling
  std::vector<Formulation> formulations{Formulation::equal_order, Formulation::reduced_order,
                                        Formulation::trial_to_test};
  int quadrature_points = 7;  // exact through degree 13

  void validate() const;
};

struct OdeStudyRow {
  Formulation formulation;
  int cells;
  double h;
  double error;
  double rate;  // NaN on the coarsest level
};

struct OdeStudyResult {
  std::vector<OdeStudyRow> rows;  // grouped by formulation, coarse to fine
  /// Largest coefficient-norm difference between reduced-order and
  /// trial-to-test solutions over the levels (NaN unless both ran).
  double max_coefficient_difference;
};

/// Problem data: the degree-6 polynomial with f = y' and y_in = y(0).
Problem ode_problem();

/// Coefficients of one formulation on a uniform grid.
FieldState solve_ode_formulation(const Discretization& disc, const GeometryField& g,
                                 Formulation f);

/// Throws LinearSolveError when a system is singular.
OdeStudyResult run_ode_study(const OdeStudyConfig& cfg);

/// Mean of the last three pairwise rates of one formulation.
double asymptotic_rate(const OdeStudyResult& result, Formulation f);

}  // namespace lsmdg
