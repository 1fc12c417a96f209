#include "lsmdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

void SolverConfig::validate(bool moving) const {
  if (lambda_y < 0.0 || lambda_sigma < 0.0 || lambda_laplacian < 0.0)
    throw ConfigError("regularization weights must be non-negative");
  if (moving && !(lambda_u > 0.0)) throw ConfigError("lambda_u must be positive for moving runs");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (max_iters < 0 || max_halvings < 0 || polish_iters < 0) throw ConfigError("iteration limits must be non-negative");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw ConfigError("backtracking factor must lie in (0, 1)");
  if (!(lambda_u_increase > 1.0) || !(lambda_u_decrease > 0.0 && lambda_u_decrease <= 1.0) ||
      !(lambda_u_floor > 0.0))
    throw ConfigError("invalid lambda_u adaptation factors");
}

DampResult damp_step(const std::function<StepTrial(double)>& trial, double current_objective,
                     double factor, int max_halvings) {
  DampResult result;
  double alpha = 1.0;
  for (int h = 0; h <= max_halvings; ++h, alpha *= factor) {
    const StepTrial t = trial(alpha);
    if (t.valid && t.objective < current_objective) {
      result.accepted = true;
      result.alpha = alpha;
      result.halvings = h;
      result.objective = t.objective;
      return result;
    }
  }
  result.halvings = max_halvings;
  return result;
}

namespace {

// Cell stiffness of the geometry basis: integral of psi_a' psi_b' over [0, 1].
Eigen::MatrixXd geometry_stiffness(const Discretization& disc) {
  const auto& t = disc.geometry_table();
  const auto& quad = disc.quadrature();
  const int n = t.functions();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < quad.size(); ++q)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) K(a, b) += quad.weights[q] * t.derivative(q, a) * t.derivative(q, b);
  return K;
}

}  // namespace

int regularization_bandwidth(const Discretization& disc, const DofMap& map,
                             const SolverConfig& cfg) {
  if (!map.moving() || cfg.lambda_laplacian == 0.0) return 0;
  const int pu = disc.degree_u();
  int bw = 0;
  for (int c = 0; c < disc.cell_count(); ++c) {
    int lo = map.size(), hi = -1;
    for (int a = 0; a <= pu; ++a) {
      const int j = map.geometry_index(c * pu + a);
      if (j < 0) continue;
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
    if (hi >= 0) bw = std::max(bw, hi - lo);
  }
  return bw;
}

void add_regularization(const Discretization& disc, const GeometryField& g, const DofMap& map,
                        const SolverConfig& cfg, double lambda_u, BandedSpdMatrix& A) {
  const int pu = disc.degree_u();
  std::vector<double> inverse_volume;
  if (map.moving() && cfg.inverse_volume_scaling) {
    for (int c = 0; c < disc.cell_count(); ++c)
      inverse_volume.push_back(1.0 / g.cell_volume(c, disc.quadrature()));
  }
  for (int j = 0; j < map.size(); ++j) {
    switch (map.kind(j)) {
      case DofKind::state:
        A.add_diagonal(j, cfg.lambda_y);
        break;
      case DofKind::auxiliary:
        A.add_diagonal(j, cfg.lambda_sigma);
        break;
      case DofKind::geometry: {
        double scale = 1.0;
        if (!inverse_volume.empty()) {
          const int d = map.geometry_dof_of(j);
          const int c = d / pu;
          if (d % pu == 0)  // shared vertex: average the two adjacent cells
            scale = 0.5 * (inverse_volume[c - 1] + inverse_volume[c]);
          else
            scale = inverse_volume[c];
        }
        A.add_diagonal(j, lambda_u * scale);
        break;
      }
    }
  }
  if (!map.moving() || cfg.lambda_laplacian == 0.0) return;
  const Eigen::MatrixXd K = geometry_stiffness(disc);
  const double weight =
      cfg.adapt_laplacian ? cfg.lambda_laplacian * lambda_u / cfg.lambda_u : cfg.lambda_laplacian;
  for (int c = 0; c < disc.cell_count(); ++c)
    for (int a = 0; a <= pu; ++a) {
      const int ja = map.geometry_index(c * pu + a);
      if (ja < 0) continue;
      for (int b = 0; b <= a; ++b) {
        const int jb = map.geometry_index(c * pu + b);
        if (jb < 0) continue;
        A.add(ja, jb, weight * K(a, b));
      }
    }
}

SolveResult gauss_newton_solve(const Discretization& disc, const GeometryField& g0,
                               const FieldState& s0, const SolverConfig& cfg, bool moving) {
  cfg.validate(moving);
  const DofMap& map = disc.dof_map(moving);
  const QuadratureRule& quad = disc.quadrature();
  const double validity_tol = g0.validity_tolerance();

  SolveResult out{s0, g0.project_boundary(), SolveReport{}};
  SolveReport& report = out.report;
  double lambda_u = cfg.lambda_u;
  double first_gradient = -1.0;
  int polished = 0;

  for (int iter = 0;; ++iter) {
    const ResidualSystem rs = assemble(disc, out.geometry, out.state, moving, true);
    const double f = objective(rs);
    const Eigen::VectorXd grad = rs.J.transpose() * rs.r;
    const double gnorm = grad.norm();
    if (first_gradient < 0.0) {
      first_gradient = gnorm;
      report.objective_history.push_back(f);
    }
    report.iterations = iter;
    report.final_objective = f;
    report.final_gradient_norm = gnorm;
    report.min_jacobian = out.geometry.check_validity(quad).min_jacobian;

    IterationRecord rec;
    rec.iter = iter;
    rec.objective = f;
    rec.grad_norm = gnorm;
    rec.lambda_u = moving ? lambda_u : 0.0;
    rec.min_jacobian = report.min_jacobian;

    if (gnorm <= std::max(cfg.abs_tol, cfg.rel_tol * first_gradient)) report.converged = true;
    if (report.converged && polished++ >= cfg.polish_iters) {
      report.records.push_back(rec);
      if (cfg.on_iteration) cfg.on_iteration(rec);
      break;
    }
    if (iter >= cfg.max_iters) {
      report.records.push_back(rec);
      if (cfg.on_iteration) cfg.on_iteration(rec);
      break;
    }

    const int bw = std::max(gram_bandwidth(rs.J), regularization_bandwidth(disc, map, cfg));
    BandedSpdMatrix gram(map.size(), bw);
    gram.add_gram(rs.J);

    // Retry with a stronger geometry regularization until a step is accepted.
    DampResult damp;
    Eigen::VectorXd delta;
    for (;;) {
      BandedSpdMatrix A = gram;
      add_regularization(disc, out.geometry, map, cfg, lambda_u, A);
      delta = solve_linear_spd(A, -grad);
      auto trial = [&](double alpha) {
        StepTrial t;
        FieldState s = out.state;
        GeometryField g = out.geometry;
        apply_increment(map, delta, alpha, s, g);
        if (moving && !(g.check_validity(quad).min_jacobian > validity_tol)) return t;
        try {
          t.objective = objective(assemble(disc, g, s, moving, false));
          t.valid = std::isfinite(t.objective);
        } catch (const AdmissibilityError&) {
        } catch (const GeometryError&) {
        }
        return t;
      };
      damp = damp_step(trial, f, cfg.backtrack_factor, cfg.max_halvings);
      const bool can_adapt = moving && cfg.adapt_lambda_u && lambda_u < cfg.lambda_u_ceiling;
      if (damp.accepted || !can_adapt) break;
      ++report.rejections;
      lambda_u *= cfg.lambda_u_increase;
    }

    if (!damp.accepted) {
      ++report.rejections;
      // A rejection right after a negligible decrease is round-off stagnation.
      const auto& h = report.objective_history;
      if (h.size() >= 2 && h[h.size() - 2] - f <= cfg.stagnation_rtol * f) report.converged = true;
      report.stalled = !report.converged;
      report.records.push_back(rec);
      if (cfg.on_iteration) cfg.on_iteration(rec);
      break;
    }

    apply_increment(map, delta, damp.alpha, out.state, out.geometry);
    report.objective_history.push_back(damp.objective);
    rec.step_scale = damp.alpha;
    report.records.push_back(rec);
    if (cfg.on_iteration) cfg.on_iteration(rec);
    if (report.converged && damp.objective > (1.0 - cfg.polish_ratio) * f) polished = cfg.polish_iters;

    // Gain ratio of the accepted step against the Gauss-Newton model decides
    // whether the geometry regularization is relaxed or tightened.
    if (moving && cfg.adapt_lambda_u) {
      const double a = damp.alpha;
      const double predicted = -a * grad.dot(delta) - 0.5 * a * a * (rs.J * delta).squaredNorm();
      const double gain = predicted > 0.0 ? (f - damp.objective) / predicted : 0.0;
      if (gain > cfg.gain_relax)
        lambda_u = std::max(cfg.lambda_u_floor, lambda_u * cfg.lambda_u_decrease);
      else if (gain < cfg.gain_tighten)
        lambda_u = std::min(cfg.lambda_u_ceiling, lambda_u * cfg.lambda_u_increase);
    }
  }
  return out;
}

}  // namespace lsmdg
