#include "lsmdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

using scalar::Jet;
using scalar::JetXi;
using scalar::Xi;

FieldState::FieldState(int cells, int m, int y_functions, int sigma_functions)
    : cell_count(cells),
      components(m),
      y_size(y_functions),
      sigma_size(sigma_functions),
      y(static_cast<std::size_t>(cells * m * y_functions), 0.0),
      sigma(static_cast<std::size_t>(cells * m * sigma_functions), 0.0) {}

DofMap::DofMap(int cells, int m, int y_functions, int sigma_functions, int geometry_degree,
               bool moving)
    : moving_(moving), ny_(y_functions), ns_(sigma_functions) {
  y_offset_ = 0;
  sigma_offset_ = m * ny_;
  geometry_.assign(static_cast<std::size_t>(cells * geometry_degree + 1), -1);
  block_.resize(cells);
  auto push = [&](DofKind kind, int geometry_dof) {
    kinds_.push_back(kind);
    geometry_dof_of_.push_back(geometry_dof);
    return size_++;
  };
  for (int c = 0; c < cells; ++c) {
    if (moving && c > 0) {
      const int v = c * geometry_degree;
      geometry_[v] = push(DofKind::geometry, v);
    }
    block_[c] = size_;
    for (int i = 0; i < m * ny_; ++i) push(DofKind::state, -1);
    for (int i = 0; i < m * ns_; ++i) push(DofKind::auxiliary, -1);
    if (moving) {
      for (int k = 1; k < geometry_degree; ++k) {
        const int d = c * geometry_degree + k;
        geometry_[d] = push(DofKind::geometry, d);
      }
    }
  }
}

namespace {

QuadratureRule default_rule(const DiscretizationOptions& o, int py, int ps, int pu) {
  const int n = o.quadrature_points > 0 ? o.quadrature_points : std::max(py, ps) + pu + 2;
  return gauss_rule(n);
}

int resolve(int value, int fallback) { return value < 0 ? fallback : value; }

}  // namespace

Discretization::Discretization(Problem problem, int cell_count,
                               const DiscretizationOptions& options)
    : problem_(std::move(problem)),
      mesh_(cell_count),
      degree_u_(resolve(options.degree_u, options.degree_y)),
      basis_y_(options.degree_y, BasisKind::modal_legendre),
      basis_sigma_(resolve(options.degree_sigma, options.degree_y), BasisKind::modal_legendre),
      quad_(default_rule(options, options.degree_y, resolve(options.degree_sigma, options.degree_y),
                         resolve(options.degree_u, options.degree_y))) {
  if (!problem_.model) throw ConfigError("discretization needs a flux model");
  if (degree_u_ < 1) throw ConfigError("geometry degree must be at least 1");
  y_table_ = BasisTable(basis_y_, quad_.points);
  sigma_table_ = BasisTable(basis_sigma_, quad_.points);
  geometry_table_ = BasisTable(PolyBasis(degree_u_, BasisKind::nodal_lobatto), quad_.points);
  y_trace_ = BasisTable(basis_y_, {0.0, 1.0});
  sigma_trace_ = BasisTable(basis_sigma_, {0.0, 1.0});
  const int m = components();
  const int ns = viscous() ? basis_sigma_.size() : 0;
  static_map_ = DofMap(cell_count, m, basis_y_.size(), ns, degree_u_, false);
  moving_map_ = DofMap(cell_count, m, basis_y_.size(), ns, degree_u_, true);
}

FieldState Discretization::zero_state() const {
  return FieldState(cell_count(), components(), basis_y_.size(),
                    viscous() ? basis_sigma_.size() : 0);
}

GeometryField Discretization::uniform_geometry(double x_left, double x_right) const {
  return GeometryField::uniform(cell_count(), degree_u_, x_left, x_right);
}

namespace {

Vec evaluate_coefficients(const PolyBasis& basis, int m, int n, const double* coeffs, double xi) {
  std::vector<double> v(n), d(n);
  basis.evaluate(xi, v.data(), d.data());
  Vec out{};
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i) out[k] += coeffs[k * n + i] * v[i];
  return out;
}

}  // namespace

Vec evaluate_state(const Discretization& disc, const FieldState& s, int cell, double xi) {
  const int m = s.components;
  return evaluate_coefficients(disc.basis_y(), m, s.y_size, &s.y[cell * m * s.y_size], xi);
}

Vec evaluate_sigma(const Discretization& disc, const FieldState& s, int cell, double xi) {
  if (s.sigma_size == 0) return Vec{};
  const int m = s.components;
  return evaluate_coefficients(disc.basis_sigma(), m, s.sigma_size,
                               &s.sigma[cell * m * s.sigma_size], xi);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Context {
  const Discretization& disc;
  const GeometryField& g;
  const FieldState& s;
  const DofMap& map;
  bool jacobian;
  ResidualSystem& rs;
  Triplets& triplets;

  void add(int row, int col, double value) {
    if (col >= 0 && value != 0.0) triplets.emplace_back(row, col, value);
  }
};

void check_state(const FluxModel& model, const Vec& y, int cell) {
  try {
    model.check_admissible(y);
  } catch (const AdmissibilityError& e) {
    std::ostringstream msg;
    msg << e.what() << " in cell " << cell;
    throw AdmissibilityError(msg.str());
  }
}

// Samples of y, dy/dxi, sigma, dsigma/dxi at quadrature point q of cell c.
struct PointSample {
  Vec y{}, y_xi{}, sigma{}, sigma_xi{};
};

PointSample sample_point(const Context& ctx, int c, int q) {
  const auto& s = ctx.s;
  const int m = s.components;
  const auto& yt = ctx.disc.y_table();
  const auto& st = ctx.disc.sigma_table();
  PointSample p;
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < s.y_size; ++i) {
      const double a = s.y_coeff(c, k, i);
      p.y[k] += a * yt.value(q, i);
      p.y_xi[k] += a * yt.derivative(q, i);
    }
    for (int i = 0; i < s.sigma_size; ++i) {
      const double a = s.sigma_coeff(c, k, i);
      p.sigma[k] += a * st.value(q, i);
      p.sigma_xi[k] += a * st.derivative(q, i);
    }
  }
  return p;
}

// Trace of y and sigma on cell c at end point `side` (0: xi = 0, 1: xi = 1).
void sample_trace(const Context& ctx, int c, int side, Vec& y, Vec& sigma) {
  const auto& s = ctx.s;
  const auto& yt = ctx.disc.y_trace();
  const auto& st = ctx.disc.sigma_trace();
  y = Vec{};
  sigma = Vec{};
  for (int k = 0; k < s.components; ++k) {
    for (int i = 0; i < s.y_size; ++i) y[k] += s.y_coeff(c, k, i) * yt.value(side, i);
    for (int i = 0; i < s.sigma_size; ++i)
      sigma[k] += s.sigma_coeff(c, k, i) * st.value(side, i);
  }
}

template <class S>
StateVec<S> total_flux(const FluxModel& model, const StateVec<S>& y, const StateVec<S>& sigma) {
  StateVec<S> f = model.convective_flux(y);
  if (!model.viscous()) return f;
  const StateVec<S> fv = model.viscous_flux(y, sigma);
  for (int k = 0; k < model.components(); ++k) f[k] -= fv[k];
  return f;
}

void assemble_cell(Context& ctx, int c) {
  const auto& disc = ctx.disc;
  const auto& model = disc.model();
  const auto& problem = disc.problem();
  const auto& quad = disc.quadrature();
  const auto& yt = disc.y_table();
  const auto& st = disc.sigma_table();
  const auto& gt = disc.geometry_table();
  const int m = disc.components();
  const int nq = quad.size();
  const int ny = ctx.s.y_size;
  const int ns = ctx.s.sigma_size;
  const int pu = ctx.g.degree();
  const bool viscous = model.viscous();
  const auto gd = ctx.g.dofs();

  for (int q = 0; q < nq; ++q) {
    const double sw = std::sqrt(quad.weights[q]);
    double x = 0.0, du = 0.0;
    for (int a = 0; a <= pu; ++a) {
      x += gd[c * pu + a] * gt.value(q, a);
      du += gd[c * pu + a] * gt.derivative(q, a);
    }
    const PointSample p = sample_point(ctx, c, q);
    check_state(model, p.y, c);
    const Vec f = problem.source ? problem.source(x) : Vec{};

    const int cons_row = ctx.rs.conservation_offset + (c * nq + q) * m;
    const int const_row = ctx.rs.constitutive_offset + (c * nq + q) * m;

    if (!ctx.jacobian) {
      StateVec<Xi> yx{}, sx{};
      for (int k = 0; k < m; ++k) {
        yx[k].val = p.y[k];
        yx[k].grad[0] = p.y_xi[k];
        sx[k].val = p.sigma[k];
        sx[k].grad[0] = p.sigma_xi[k];
      }
      const StateVec<Xi> flux = total_flux(model, yx, sx);
      for (int k = 0; k < m; ++k) ctx.rs.r[cons_row + k] = sw * (flux[k].grad[0] - du * f[k]);
      if (viscous) {
        const Vec gy = model.constitutive(p.y, p.y_xi);
        for (int k = 0; k < m; ++k) ctx.rs.r[const_row + k] = sw * (du * p.sigma[k] - gy[k]);
      }
      continue;
    }

    // Local directions: y (0..m-1), y_xi (m..2m-1), sigma (2m..), sigma_xi (3m..).
    StateVec<JetXi> yx{}, sx{};
    StateVec<Jet> jy{}, jyx{};
    for (int k = 0; k < m; ++k) {
      jy[k] = Jet::variable(p.y[k], k);
      jyx[k] = Jet::variable(p.y_xi[k], m + k);
      yx[k].val = jy[k];
      yx[k].grad[0] = jyx[k];
      sx[k].val = Jet::variable(p.sigma[k], 2 * m + k);
      sx[k].grad[0] = Jet::variable(p.sigma_xi[k], 3 * m + k);
    }
    const StateVec<JetXi> flux = total_flux(model, yx, sx);
    const Vec fx = (problem.source_derivative && ctx.map.moving()) ? problem.source_derivative(x)
                                                                   : Vec{};
    for (int k = 0; k < m; ++k) {
      const Jet& dF = flux[k].grad[0];
      const int row = cons_row + k;
      ctx.rs.r[row] = sw * (dF.val - du * f[k]);
      for (int j = 0; j < m; ++j) {
        const double a = dF.grad[j], b = dF.grad[m + j];
        if (a != 0.0 || b != 0.0)
          for (int i = 0; i < ny; ++i)
            ctx.add(row, ctx.map.y_index(c, j, i), sw * (a * yt.value(q, i) + b * yt.derivative(q, i)));
        if (!viscous) continue;
        const double e = dF.grad[2 * m + j], h = dF.grad[3 * m + j];
        if (e != 0.0 || h != 0.0)
          for (int i = 0; i < ns; ++i)
            ctx.add(row, ctx.map.sigma_index(c, j, i),
                    sw * (e * st.value(q, i) + h * st.derivative(q, i)));
      }
      if (ctx.map.moving())
        for (int a = 0; a <= pu; ++a)
          ctx.add(row, ctx.map.geometry_index(c * pu + a),
                  -sw * (f[k] * gt.derivative(q, a) + du * fx[k] * gt.value(q, a)));
    }

    if (!viscous) continue;
    const StateVec<Jet> gy = model.constitutive(jy, jyx);
    for (int k = 0; k < m; ++k) {
      const int row = const_row + k;
      ctx.rs.r[row] = sw * (du * p.sigma[k] - gy[k].val);
      for (int j = 0; j < m; ++j) {
        const double a = gy[k].grad[j], b = gy[k].grad[m + j];
        if (a != 0.0 || b != 0.0)
          for (int i = 0; i < ny; ++i)
            ctx.add(row, ctx.map.y_index(c, j, i), -sw * (a * yt.value(q, i) + b * yt.derivative(q, i)));
      }
      for (int i = 0; i < ns; ++i) ctx.add(row, ctx.map.sigma_index(c, k, i), sw * du * st.value(q, i));
      if (ctx.map.moving())
        for (int a = 0; a <= pu; ++a)
          ctx.add(row, ctx.map.geometry_index(c * pu + a), sw * p.sigma[k] * gt.derivative(q, a));
    }
  }
}

// Adds the trace sensitivities of an interface row: directions `offset`..
// offset+m-1 are y on `cell`, offset+m.. are sigma on `cell`.
void add_trace_columns(Context& ctx, int row, const Jet& value, int cell, int side, int offset) {
  const int m = ctx.s.components;
  const auto& yt = ctx.disc.y_trace();
  const auto& st = ctx.disc.sigma_trace();
  for (int j = 0; j < m; ++j) {
    const double a = value.grad[offset + j];
    if (a != 0.0)
      for (int i = 0; i < ctx.s.y_size; ++i)
        ctx.add(row, ctx.map.y_index(cell, j, i), a * yt.value(side, i));
    if (ctx.s.sigma_size == 0) continue;
    const double b = value.grad[offset + m + j];
    if (b != 0.0)
      for (int i = 0; i < ctx.s.sigma_size; ++i)
        ctx.add(row, ctx.map.sigma_index(cell, j, i), b * st.value(side, i));
  }
}

template <class S>
void interior_interface(const FluxModel& model, const StateVec<S>& yl, const StateVec<S>& sl,
                        const StateVec<S>& yr, const StateVec<S>& sr, StateVec<S>& flux_row,
                        StateVec<S>& state_row) {
  const int m = model.components();
  const StateVec<S> fl = total_flux(model, yl, sl);
  const StateVec<S> fr = total_flux(model, yr, sr);
  for (int k = 0; k < m; ++k) flux_row[k] = fl[k] - fr[k];
  state_row = StateVec<S>{};
  if (!model.viscous()) return;
  StateVec<S> jump{};
  for (int k = 0; k < m; ++k) jump[k] = yl[k] - yr[k];
  const StateVec<S> gl = model.constitutive(yl, jump);
  const StateVec<S> gr = model.constitutive(yr, jump);
  for (int k = 0; k < m; ++k) state_row[k] = 0.5 * (gl[k] + gr[k]);
}

void assemble_interface(Context& ctx, int e) {
  const auto& disc = ctx.disc;
  const auto& model = disc.model();
  const int m = disc.components();
  const Interface& face = disc.mesh().interface(e);
  const int flux_row = ctx.rs.flux_offset + e * m;
  const int state_row = ctx.rs.state_offset + e * m;
  const bool viscous = model.viscous();

  if (!face.boundary()) {
    Vec yl, sl, yr, sr;
    sample_trace(ctx, face.left_cell, 1, yl, sl);
    sample_trace(ctx, face.right_cell, 0, yr, sr);
    check_state(model, yl, face.left_cell);
    check_state(model, yr, face.right_cell);
    if (!ctx.jacobian) {
      Vec fr{}, gr{};
      interior_interface(model, yl, sl, yr, sr, fr, gr);
      for (int k = 0; k < m; ++k) {
        ctx.rs.r[flux_row + k] = fr[k];
        if (viscous) ctx.rs.r[state_row + k] = gr[k];
      }
      return;
    }
    StateVec<Jet> jyl{}, jsl{}, jyr{}, jsr{};
    for (int k = 0; k < m; ++k) {
      jyl[k] = Jet::variable(yl[k], k);
      jsl[k] = Jet::variable(sl[k], m + k);
      jyr[k] = Jet::variable(yr[k], 2 * m + k);
      jsr[k] = Jet::variable(sr[k], 3 * m + k);
    }
    StateVec<Jet> fr{}, gr{};
    interior_interface(model, jyl, jsl, jyr, jsr, fr, gr);
    for (int k = 0; k < m; ++k) {
      ctx.rs.r[flux_row + k] = fr[k].val;
      add_trace_columns(ctx, flux_row + k, fr[k], face.left_cell, 1, 0);
      add_trace_columns(ctx, flux_row + k, fr[k], face.right_cell, 0, 2 * m);
      if (!viscous) continue;
      ctx.rs.r[state_row + k] = gr[k].val;
      add_trace_columns(ctx, state_row + k, gr[k], face.left_cell, 1, 0);
      add_trace_columns(ctx, state_row + k, gr[k], face.right_cell, 0, 2 * m);
    }
    return;
  }

  const bool left = face.left_cell < 0;
  const int cell = left ? face.right_cell : face.left_cell;
  const int side = left ? 0 : 1;
  const double normal = left ? -1.0 : 1.0;
  const BoundaryCondition& bc = left ? disc.problem().left : disc.problem().right;
  Vec y, sigma;
  sample_trace(ctx, cell, side, y, sigma);
  check_state(model, y, cell);
  if (!ctx.jacobian) {
    const Vec fr = boundary_flux_residual(model, bc, normal, y, sigma);
    const Vec gr = boundary_state_residual(model, bc, normal, y);
    for (int k = 0; k < m; ++k) {
      ctx.rs.r[flux_row + k] = fr[k];
      if (viscous) ctx.rs.r[state_row + k] = gr[k];
    }
    return;
  }
  StateVec<Jet> jy{}, js{};
  for (int k = 0; k < m; ++k) {
    jy[k] = Jet::variable(y[k], k);
    js[k] = Jet::variable(sigma[k], m + k);
  }
  const StateVec<Jet> fr = boundary_flux_residual(model, bc, normal, jy, js);
  const StateVec<Jet> gr = boundary_state_residual(model, bc, normal, jy);
  for (int k = 0; k < m; ++k) {
    ctx.rs.r[flux_row + k] = fr[k].val;
    add_trace_columns(ctx, flux_row + k, fr[k], cell, side, 0);
    if (!viscous) continue;
    ctx.rs.r[state_row + k] = gr[k].val;
    add_trace_columns(ctx, state_row + k, gr[k], cell, side, 0);
  }
}

}  // namespace

ResidualSystem assemble(const Discretization& disc, const GeometryField& g, const FieldState& s,
                        bool moving, bool with_jacobian) {
  if (g.cell_count() != disc.cell_count() || g.degree() != disc.degree_u())
    throw ConfigError("geometry does not match the discretization");
  if (s.cell_count != disc.cell_count() || s.components != disc.components())
    throw ConfigError("field state does not match the discretization");
  const ValidityReport validity = g.check_validity(disc.quadrature());
  if (!(validity.min_jacobian > 0.0)) {
    std::ostringstream msg;
    msg << "invalid geometry: u' = " << validity.min_jacobian << " in cell "
        << validity.worst_cell;
    throw GeometryError(msg.str());
  }

  ResidualSystem rs;
  rs.conservation_offset = 0;
  rs.constitutive_offset = disc.conservation_rows();
  rs.flux_offset = rs.constitutive_offset + disc.constitutive_rows();
  rs.state_offset = rs.flux_offset + disc.interface_rows();
  rs.r = Eigen::VectorXd::Zero(disc.residual_size());

  const DofMap& map = disc.dof_map(moving);
  Triplets triplets;
  Context ctx{disc, g, s, map, with_jacobian, rs, triplets};
  for (int c = 0; c < disc.cell_count(); ++c) assemble_cell(ctx, c);
  for (int e = 0; e < disc.mesh().interface_count(); ++e) assemble_interface(ctx, e);

  if (with_jacobian) {
    rs.J.resize(disc.residual_size(), map.size());
    rs.J.setFromTriplets(triplets.begin(), triplets.end());
  }
  return rs;
}

double objective(const Eigen::VectorXd& r) { return 0.5 * r.squaredNorm(); }
double objective(const ResidualSystem& rs) { return objective(rs.r); }

Eigen::VectorXd pack_unknowns(const DofMap& map, const FieldState& s, const GeometryField& g) {
  Eigen::VectorXd z(map.size());
  const int m = s.components;
  for (int c = 0; c < s.cell_count; ++c)
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < s.y_size; ++i) z[map.y_index(c, k, i)] = s.y_coeff(c, k, i);
      for (int i = 0; i < s.sigma_size; ++i) z[map.sigma_index(c, k, i)] = s.sigma_coeff(c, k, i);
    }
  const auto gd = g.dofs();
  for (int d = 0; d < g.dof_count(); ++d)
    if (map.geometry_index(d) >= 0) z[map.geometry_index(d)] = gd[d];
  return z;
}

void apply_increment(const DofMap& map, const Eigen::VectorXd& delta, double alpha,
                     FieldState& s, GeometryField& g) {
  const int m = s.components;
  for (int c = 0; c < s.cell_count; ++c)
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < s.y_size; ++i) s.y_coeff(c, k, i) += alpha * delta[map.y_index(c, k, i)];
      for (int i = 0; i < s.sigma_size; ++i)
        s.sigma_coeff(c, k, i) += alpha * delta[map.sigma_index(c, k, i)];
    }
  if (!map.moving()) return;
  auto gd = g.dofs();
  for (int d = 0; d < g.dof_count(); ++d)
    if (map.geometry_index(d) >= 0) gd[d] += alpha * delta[map.geometry_index(d)];
  g = g.project_boundary();
}

std::pair<FieldState, GeometryField> bisect_cells(const Discretization& coarse,
                                                  const FieldState& s, const GeometryField& g,
                                                  const Discretization& fine) {
  const int n = coarse.cell_count();
  if (fine.cell_count() != 2 * n || fine.degree_y() != coarse.degree_y() ||
      fine.degree_u() != g.degree() || fine.components() != coarse.components() ||
      fine.viscous() != coarse.viscous())
    throw ConfigError("bisect_cells: incompatible discretizations");
  const int pu = g.degree();
  const std::vector<double>& nodes = g.basis().nodes();
  std::vector<double> dofs(2 * n * pu + 1);
  FieldState out = fine.zero_state();
  // Modal bases are orthonormal on [0, 1], so coefficients are plain moments.
  const QuadratureRule quad = gauss_rule(std::max(coarse.degree_y(), coarse.degree_sigma()) + 1);
  const BasisTable ty(fine.basis_y(), quad.points);
  const BasisTable ts(fine.basis_sigma(), quad.points);
  for (int c = 0; c < n; ++c) {
    for (int half = 0; half < 2; ++half) {
      const int f = 2 * c + half;
      for (int k = 0; k <= pu; ++k)
        dofs[f * pu + k] = g.evaluate_mapping(c, 0.5 * (half + nodes[k])).x;
      for (int q = 0; q < quad.size(); ++q) {
        const double xi = 0.5 * (half + quad.points[q]);
        const double w = quad.weights[q];
        const Vec y = evaluate_state(coarse, s, c, xi);
        for (int k = 0; k < out.components; ++k)
          for (int i = 0; i < out.y_size; ++i) out.y_coeff(f, k, i) += w * y[k] * ty.value(q, i);
        if (out.sigma_size == 0) continue;
        const Vec sg = evaluate_sigma(coarse, s, c, xi);
        for (int k = 0; k < out.components; ++k)
          for (int i = 0; i < out.sigma_size; ++i)
            out.sigma_coeff(f, k, i) += w * sg[k] * ts.value(q, i);
      }
    }
  }
  return {std::move(out), GeometryField(2 * n, pu, std::move(dofs), g.bounds())};
}

double jacobian_check(const Discretization& disc, const GeometryField& g, const FieldState& s,
                      bool moving, double h) {
  const ResidualSystem rs = assemble(disc, g, s, moving, true);
  const DofMap& map = disc.dof_map(moving);
  const Eigen::MatrixXd analytic = Eigen::MatrixXd(rs.J);
  Eigen::MatrixXd fd(rs.r.size(), map.size());
  for (int j = 0; j < map.size(); ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(map.size());
    e[j] = 1.0;
    FieldState sp = s, sm = s;
    GeometryField gp = g, gm = g;
    apply_increment(map, e, h, sp, gp);
    apply_increment(map, e, -h, sm, gm);
    const Eigen::VectorXd rp = assemble(disc, gp, sp, moving, false).r;
    const Eigen::VectorXd rm = assemble(disc, gm, sm, moving, false).r;
    fd.col(j) = (rp - rm) / (2.0 * h);
  }
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-300);
  return (fd - analytic).cwiseAbs().maxCoeff() / scale;
}

DlsSystem assemble_dls(const Discretization& disc, const GeometryField& g, int test_degree) {
  const FluxModel& model = disc.model();
  if (model.viscous() || model.components() != 1 ||
      dynamic_cast<const AdvectionDiffusionModel*>(&model) == nullptr)
    throw ConfigError("discrete least-squares assembly supports pure linear advection only");
  if (test_degree < 0) throw ConfigError("test degree must be non-negative");
  const auto& problem = disc.problem();
  const double v = static_cast<const AdvectionDiffusionModel&>(model).velocity();
  const int cells = disc.cell_count();
  const int ny = disc.basis_y().size();
  const int nt = test_degree + 1;
  const int pu = g.degree();
  const auto& quad = disc.quadrature();
  const auto& yt = disc.y_table();
  const auto& gt = disc.geometry_table();
  const auto& ytr = disc.y_trace();
  const BasisTable tt(PolyBasis(test_degree, BasisKind::nodal_lobatto), quad.points);
  const auto gd = g.dofs();

  DlsSystem sys;
  const int rows = cells * nt + cells;
  sys.rhs = Eigen::VectorXd::Zero(rows);
  Triplets triplets;
  for (int c = 0; c < cells; ++c) {
    for (int q = 0; q < quad.size(); ++q) {
      double x = 0.0, du = 0.0;
      for (int a = 0; a <= pu; ++a) {
        x += gd[c * pu + a] * gt.value(q, a);
        du += gd[c * pu + a] * gt.derivative(q, a);
      }
      const double f = problem.source ? problem.source(x)[0] : 0.0;
      for (int j = 0; j < nt; ++j) {
        const double wpsi = quad.weights[q] * tt.value(q, j);
        for (int i = 0; i < ny; ++i)
          triplets.emplace_back(c * nt + j, c * ny + i, wpsi * v * yt.derivative(q, i));
        sys.rhs[c * nt + j] += wpsi * du * f;
      }
    }
  }
  // Inflow row, then continuity of the upwind trace at interior interfaces.
  const int base = cells * nt;
  for (int i = 0; i < ny; ++i) triplets.emplace_back(base, i, v * ytr.value(0, i));
  sys.rhs[base] = v * problem.left.state[0];
  for (int e = 1; e < cells; ++e)
    for (int i = 0; i < ny; ++i) {
      triplets.emplace_back(base + e, (e - 1) * ny + i, v * ytr.value(1, i));
      triplets.emplace_back(base + e, e * ny + i, -v * ytr.value(0, i));
    }
  sys.B.resize(rows, cells * ny);
  sys.B.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

}  // namespace lsmdg
