#include "lsmdg/ode_study.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

#include "lsmdg/banded.hpp"
#include "lsmdg/errors.hpp"
#include "lsmdg/oracles.hpp"
#include "lsmdg/solver.hpp"

namespace lsmdg {

std::string formulation_name(Formulation f) {
  switch (f) {
    case Formulation::equal_order: return "equal_order";
    case Formulation::reduced_order: return "reduced_order";
    case Formulation::trial_to_test: return "trial_to_test";
  }
  return "unknown";
}

Formulation parse_formulation(const std::string& name) {
  for (Formulation f : {Formulation::equal_order, Formulation::reduced_order,
                        Formulation::trial_to_test})
    if (formulation_name(f) == name) return f;
  throw ConfigError("unknown formulation '" + name + "'");
}

void OdeStudyConfig::validate() const {
  if (degree < 1) throw ConfigError("ode study: degree must be at least 1");
  if (coarsest_cells < 2) throw ConfigError("ode study: at least two cells required");
  if (levels < 1) throw ConfigError("ode study: at least one level required");
  if (formulations.empty()) throw ConfigError("ode study: no formulation selected");
}

Problem ode_problem() {
  Problem problem;
  problem.model = std::make_shared<AdvectionDiffusionModel>(1.0, 0.0);
  problem.left = {BoundaryKind::dirichlet, {ode_polynomial(0.0), 0.0, 0.0}};
  problem.right = {BoundaryKind::outflow, {}};
  problem.source = [](double x) { return Vec{ode_polynomial_derivative(x), 0.0, 0.0}; };
  problem.source_derivative = [](double x) {
    return Vec{ode_polynomial_second_derivative(x), 0.0, 0.0};
  };
  return problem;
}

namespace {

FieldState from_coefficients(const Discretization& disc, const Eigen::VectorXd& c) {
  FieldState s = disc.zero_state();
  for (std::size_t i = 0; i < s.y.size(); ++i) s.y[i] = c[static_cast<Eigen::Index>(i)];
  return s;
}

}  // namespace

FieldState solve_ode_formulation(const Discretization& disc, const GeometryField& g,
                                 Formulation f) {
  const int p = disc.degree_y();
  switch (f) {
    case Formulation::reduced_order: {
      const DlsSystem sys = assemble_dls(disc, g, p - 1);
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(sys.B);
      if (lu.info() != Eigen::Success) throw LinearSolveError("reduced-order system is singular");
      return from_coefficients(disc, lu.solve(sys.rhs));
    }
    case Formulation::equal_order: {
      const DlsSystem sys = assemble_dls(disc, g, p);
      const Eigen::Index n = sys.B.cols();
      Eigen::VectorXd scale(n);
      for (Eigen::Index j = 0; j < n; ++j) scale[j] = 1.0 / sys.B.col(j).norm();
      Eigen::SparseMatrix<double, Eigen::RowMajor> B = sys.B * scale.asDiagonal();
      BandedSpdMatrix A(static_cast<int>(n), gram_bandwidth(B));
      A.add_gram(B);
      const Eigen::VectorXd z = solve_linear_spd(A, B.transpose() * sys.rhs);
      return from_coefficients(disc, scale.cwiseProduct(z));
    }
    case Formulation::trial_to_test: {
      SolverConfig cfg;
      cfg.max_iters = 5;
      return gauss_newton_solve(disc, g, disc.zero_state(), cfg, false).state;
    }
  }
  throw ConfigError("unknown formulation");
}

OdeStudyResult run_ode_study(const OdeStudyConfig& cfg) {
  cfg.validate();
  OdeStudyResult result;
  result.max_coefficient_difference = std::numeric_limits<double>::quiet_NaN();
  const Problem problem = ode_problem();
  const ExactSolution exact = [](double x) { return Vec{ode_polynomial(x), 0.0, 0.0}; };

  std::vector<std::vector<FieldState>> solutions(cfg.formulations.size());
  for (std::size_t fi = 0; fi < cfg.formulations.size(); ++fi) {
    const Formulation f = cfg.formulations[fi];
    double previous_error = 0.0, previous_h = 0.0;
    for (int level = 0; level < cfg.levels; ++level) {
      const int cells = cfg.coarsest_cells << level;
      DiscretizationOptions options;
      options.degree_y = cfg.degree;
      options.degree_u = 1;
      options.quadrature_points = cfg.quadrature_points;
      const Discretization disc(problem, cells, options);
      const GeometryField g = disc.uniform_geometry(0.0, 1.0);
      FieldState s = solve_ode_formulation(disc, g, f);
      const double h = 1.0 / cells;
      const double error = l2_error(disc, s, g, exact);
      double rate = std::numeric_limits<double>::quiet_NaN();
      if (level > 0 && error > 0.0 && previous_error > 0.0)
        rate = std::log(previous_error / error) / std::log(previous_h / h);
      result.rows.push_back({f, cells, h, error, rate});
      previous_error = error;
      previous_h = h;
      solutions[fi].push_back(std::move(s));
    }
  }

  int reduced = -1, trial = -1;
  for (std::size_t fi = 0; fi < cfg.formulations.size(); ++fi) {
    if (cfg.formulations[fi] == Formulation::reduced_order) reduced = static_cast<int>(fi);
    if (cfg.formulations[fi] == Formulation::trial_to_test) trial = static_cast<int>(fi);
  }
  if (reduced >= 0 && trial >= 0) {
    double worst = 0.0;
    for (int level = 0; level < cfg.levels; ++level) {
      const auto& a = solutions[reduced][level].y;
      const auto& b = solutions[trial][level].y;
      double sum = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
      worst = std::max(worst, std::sqrt(sum));
    }
    result.max_coefficient_difference = worst;
  }
  return result;
}

double asymptotic_rate(const OdeStudyResult& result, Formulation f) {
  std::vector<double> rates;
  for (const auto& row : result.rows)
    if (row.formulation == f && std::isfinite(row.rate)) rates.push_back(row.rate);
  if (rates.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = std::min<std::size_t>(3, rates.size());
  double sum = 0.0;
  for (std::size_t i = rates.size() - n; i < rates.size(); ++i) sum += rates[i];
  return sum / static_cast<double>(n);
}

}  // namespace lsmdg
