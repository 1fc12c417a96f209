#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>

#include "lsmdg/banded.hpp"
#include "lsmdg/errors.hpp"
#include "lsmdg/experiments.hpp"
#include "lsmdg/oracles.hpp"
#include "lsmdg/solver.hpp"

using namespace lsmdg;

namespace {

DiscretizationOptions degree(int p) {
  DiscretizationOptions o;
  o.degree_y = p;
  return o;
}

// Accepted-step invariants shared by every solve below.
void check_history(const SolveResult& r, const GeometryField& g0) {
  const auto& h = r.report.objective_history;
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] < h[i - 1]);
  const double tol = g0.validity_tolerance();
  for (const IterationRecord& rec : r.report.records) CHECK(rec.min_jacobian > tol);
}

}  // namespace

TEST_CASE("banded Cholesky solves") {
  BandedSpdMatrix I(4, 1);
  for (int i = 0; i < 4; ++i) I.add_diagonal(i, 1.0);
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
  CHECK((solve_linear_spd(I, b) - b).norm() < 1e-15);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 3.0;
  const Eigen::VectorXd x = solve_linear_spd(D, Eigen::Vector2d(2.0, 3.0));
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  std::mt19937 rng(17);
  std::normal_distribution<double> n;
  Eigen::MatrixXd A(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) A(i, j) = n(rng);
  const Eigen::MatrixXd S = A.transpose() * A + Eigen::MatrixXd::Identity(50, 50);
  Eigen::VectorXd rhs(50);
  for (int i = 0; i < 50; ++i) rhs[i] = n(rng);
  const Eigen::VectorXd y = solve_linear_spd(S, rhs);
  CHECK((S * y - rhs).norm() <= 1e-10 * rhs.norm());

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(solve_linear_spd(bad, Eigen::Vector3d(1, 1, 1)), LinearSolveError);
}

TEST_CASE("banded storage") {
  BandedSpdMatrix A(5, 2);
  A.add(3, 1, 2.0);
  CHECK(A(1, 3) == 2.0);
  CHECK(A(3, 1) == 2.0);
  CHECK(A(0, 4) == 0.0);
  CHECK_THROWS(A.add(4, 0, 1.0));
  Eigen::SparseMatrix<double, Eigen::RowMajor> J(3, 5);
  J.insert(0, 0) = 1.0;
  J.insert(0, 2) = 2.0;
  J.insert(1, 3) = 1.0;
  J.insert(2, 4) = 3.0;
  J.insert(2, 3) = 1.0;
  CHECK(gram_bandwidth(J) == 2);
  BandedSpdMatrix G(5, 2);
  G.add_gram(J);
  const Eigen::MatrixXd dense(J);
  CHECK((G.dense() - dense.transpose() * dense).norm() < 1e-15);
}

TEST_CASE("step damping") {
  SUBCASE("a zero step is rejected") {
    const DampResult d = damp_step([](double) { return StepTrial{true, 1.0}; }, 1.0);
    CHECK_FALSE(d.accepted);
    CHECK(d.halvings == 30);
  }
  SUBCASE("an exact step is taken in full") {
    // Objective (1 - alpha)^2 along the Newton direction of a linear problem.
    const DampResult d =
        damp_step([](double a) { return StepTrial{true, (1 - a) * (1 - a)}; }, 1.0);
    CHECK(d.accepted);
    CHECK(d.alpha == 1.0);
    CHECK(d.objective == 0.0);
  }
  SUBCASE("a step that folds a cell is halved") {
    // Moving the interior vertex of (0, 0.5, 1) by 0.6 passes the right end;
    // half the step keeps the cells ordered and still lowers the objective.
    const QuadratureRule q = gauss_rule(2);
    auto trial = [&](double a) {
      const double x = 0.5 + 0.6 * a;
      const GeometryField g(2, 1, {0.0, x, 1.0}, {0.0, 1.0});
      StepTrial t;
      t.valid = g.check_validity(q).min_jacobian > g.validity_tolerance();
      t.objective = (x - 0.9) * (x - 0.9);
      return t;
    };
    const DampResult d = damp_step(trial, 0.16);
    CHECK(d.accepted);
    CHECK(d.alpha <= 0.5);
    CHECK(d.objective < 0.16);
  }
}

TEST_CASE("configuration validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate(true));
  cfg.lambda_y = -1.0;
  CHECK_THROWS_AS(cfg.validate(false), ConfigError);
  cfg = SolverConfig{};
  cfg.lambda_u = 0.0;
  CHECK_NOTHROW(cfg.validate(false));
  CHECK_THROWS_AS(cfg.validate(true), ConfigError);
  cfg = SolverConfig{};
  cfg.abs_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(false), ConfigError);
  cfg = SolverConfig{};
  cfg.backtrack_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(false), ConfigError);
}

TEST_CASE("linear static problem converges in one step") {
  const Discretization disc(boundary_layer_problem(10.0), 8, degree(2));
  const GeometryField g = disc.uniform_geometry(0.0, 1.0);
  SolverConfig cfg;
  cfg.polish_iters = 0;
  const SolveResult r = gauss_newton_solve(disc, g, disc.zero_state(), cfg, false);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  check_history(r, g);
}

TEST_CASE("converged linear solution does not depend on the initial guess") {
  const Discretization disc(boundary_layer_problem(10.0), 6, degree(3));
  const GeometryField g = disc.uniform_geometry(0.0, 1.0);
  FieldState a = disc.zero_state();
  FieldState b = disc.zero_state();
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (double& v : b.y) v = u(rng);
  for (double& v : b.sigma) v = u(rng);
  const SolverConfig cfg;
  const SolveResult ra = gauss_newton_solve(disc, g, a, cfg, false);
  const SolveResult rb = gauss_newton_solve(disc, g, b, cfg, false);
  for (std::size_t i = 0; i < ra.state.y.size(); ++i)
    CHECK(std::abs(ra.state.y[i] - rb.state.y[i]) < 1e-10);
  for (std::size_t i = 0; i < ra.state.sigma.size(); ++i)
    CHECK(std::abs(ra.state.sigma[i] - rb.state.sigma[i]) < 1e-10);
}

TEST_CASE("moving boundary layer clusters nodes at the outflow") {
  const RunResult run = run_boundary_layer(10.0, 2, 8, true, SolverConfig{});
  const RunResult fixed = run_boundary_layer(10.0, 2, 8, false, SolverConfig{});
  CHECK(run.report.converged);
  CHECK(run.report.final_objective < 1e-3 * fixed.report.final_objective);
  CHECK(boundary_layer_error(run, 10.0) < 0.1 * boundary_layer_error(fixed, 10.0));
  const auto v = run.geometry.vertices();
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(v[8] - v[7] < v[1] - v[0]);
  int right = 0;
  for (double x : v) right += x > 0.5;
  CHECK(right > 5);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}

TEST_CASE("accepted iterates decrease the objective and stay valid") {
  SUBCASE("boundary layer") {
    const Discretization disc(boundary_layer_problem(100.0), 4, degree(2));
    const GeometryField g = disc.uniform_geometry(0.0, 1.0);
    const FieldState s = l2_project(disc, g, [](double x) { return Vec{x, 0, 0}; });
    check_history(gauss_newton_solve(disc, g, s, SolverConfig{}, true), g);
  }
  SUBCASE("Burgers") {
    SolverConfig cfg;
    cfg.max_iters = 150;
    const RunResult run = run_burgers(1e-2, 1.0, 2, 8, true, cfg);
    const GeometryField g = run.disc->uniform_geometry(-0.5, 0.5);
    check_history({run.state, run.geometry, run.report}, g);
  }
  SUBCASE("Burgers with the shock preset") {
    SolverConfig cfg = burgers_shock_config();
    cfg.max_iters = 300;
    const RunResult run = run_burgers(1e-2, 1.0, 2, 8, true, cfg);
    const GeometryField g = run.disc->uniform_geometry(-0.5, 0.5);
    check_history({run.state, run.geometry, run.report}, g);
    CHECK(run.report.final_objective < 1e-3 * run.report.objective_history.front());
  }
  SUBCASE("Navier-Stokes") {
    SolverConfig cfg = ns_shock_config();
    cfg.max_iters = 150;
    const RunResult run = run_ns_shock({}, 2, 8, cfg);
    const GeometryField g = run.disc->uniform_geometry(-1.0, 1.0);
    check_history({run.state, run.geometry, run.report}, g);
  }
}

TEST_CASE("iteration histories are reproducible") {
  SolverConfig cfg;
  cfg.max_iters = 40;
  const RunResult a = run_burgers(1e-2, 1.0, 2, 6, true, cfg);
  const RunResult b = run_burgers(1e-2, 1.0, 2, 6, true, cfg);
  REQUIRE(a.report.objective_history.size() == b.report.objective_history.size());
  for (std::size_t i = 0; i < a.report.objective_history.size(); ++i)
    CHECK(a.report.objective_history[i] == b.report.objective_history[i]);
  CHECK(a.state.y == b.state.y);
}

TEST_CASE("regularization terms") {
  const Discretization disc(boundary_layer_problem(10.0), 3, degree(2));
  const DofMap& map = disc.dof_map(true);
  const GeometryField g = GeometryField::from_vertices({0.0, 0.2, 0.6, 1.0}, 2);
  SolverConfig cfg;
  cfg.lambda_y = 0.5;
  cfg.lambda_sigma = 0.25;
  cfg.inverse_volume_scaling = true;
  BandedSpdMatrix A(map.size(), 0);
  add_regularization(disc, g, map, cfg, 2.0, A);
  const QuadratureRule& q = disc.quadrature();
  for (int j = 0; j < map.size(); ++j) {
    switch (map.kind(j)) {
      case DofKind::state: CHECK(A(j, j) == 0.5); break;
      case DofKind::auxiliary: CHECK(A(j, j) == 0.25); break;
      case DofKind::geometry: {
        const int d = map.geometry_dof_of(j);
        const int c = d / 2;
        const double expected =
            d % 2 == 0 ? 2.0 * 0.5 * (1.0 / g.cell_volume(c - 1, q) + 1.0 / g.cell_volume(c, q))
                       : 2.0 / g.cell_volume(c, q);
        CHECK(A(j, j) == doctest::Approx(expected));
        break;
      }
    }
  }

  // With the end nodes fixed, a uniform shift of the interior nodes strains
  // the two boundary cells, so the stiffness term sees it.
  SolverConfig lap;
  lap.lambda_laplacian = 1.0;
  const int bw = regularization_bandwidth(disc, map, lap);
  CHECK(bw > 0);
  BandedSpdMatrix L(map.size(), bw);
  add_regularization(disc, g, map, lap, 0.0, L);
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(map.size());
  for (int j = 0; j < map.size(); ++j)
    if (map.kind(j) == DofKind::geometry) ones[j] = 1.0;
  CHECK(ones.dot(L.multiply(ones)) > 0.0);

  // Following lambda_u: doubling it doubles the Laplacian block as well.
  SolverConfig follow = lap;
  follow.adapt_laplacian = true;
  BandedSpdMatrix F(map.size(), bw);
  add_regularization(disc, g, map, follow, 2.0 * follow.lambda_u, F);
  Eigen::MatrixXd expected = 2.0 * L.dense();
  for (int j = 0; j < map.size(); ++j)
    if (map.kind(j) == DofKind::geometry) expected(j, j) += 2.0 * follow.lambda_u;
  CHECK((F.dense() - expected).norm() < 1e-12 * expected.norm());
}
