// Least-squares residual of the reference-space formulation and its exact
// Jacobian with respect to (y, sigma, u).
//
// Residual families, in this order:
//   conservation   sqrt(w_q) (d/dxi F(y, sigma) - u' f(u))   per cell, per point
//   constitutive   sqrt(w_q) (u' sigma - G(y) dy/dxi)        per cell, per point
//   flux jump      sum of s F over the traces of an interface
//   state jump     {G(y)} [y s] on every interface
// Interfaces carry no weights: in one dimension the scaled normal is the
// orientation sign. Pure advection drops the constitutive and state families.
// Because every test space is L2 with a quadrature inner product, the
// optimal test functions are the columns of J and the weak form is J^T r = 0.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "lsmdg/approximation.hpp"
#include "lsmdg/mesh_geometry.hpp"
#include "lsmdg/physics.hpp"

namespace lsmdg {

/// Flux model plus boundary and source data.
struct Problem {
  std::shared_ptr<const FluxModel> model;
  BoundaryCondition left;
  BoundaryCondition right;
  /// Source f(x) and df/dx; either may be empty for f = 0.
  std::function<Vec(double)> source;
  std::function<Vec(double)> source_derivative;
};

/// Per-cell discontinuous modal coefficients of y and sigma.
struct FieldState {
  int cell_count = 0;
  int components = 0;
  int y_size = 0;      // p_y + 1
  int sigma_size = 0;  // p_sigma + 1, or 0 without an auxiliary variable
  std::vector<double> y;
  std::vector<double> sigma;

  FieldState() = default;
  FieldState(int cells, int m, int y_functions, int sigma_functions);

  double& y_coeff(int c, int k, int i) { return y[(c * components + k) * y_size + i]; }
  double y_coeff(int c, int k, int i) const { return y[(c * components + k) * y_size + i]; }
  double& sigma_coeff(int c, int k, int i) {
    return sigma[(c * components + k) * sigma_size + i];
  }
  double sigma_coeff(int c, int k, int i) const {
    return sigma[(c * components + k) * sigma_size + i];
  }
};

enum class DofKind { state, auxiliary, geometry };

/// Global unknown numbering. Unknowns are grouped cell by cell (left vertex,
/// y, sigma, interior geometry nodes) so J^T J is banded. The two boundary
/// vertices are not unknowns: their columns vanish after composition with the
/// boundary projection derivative.
class DofMap {
 public:
  DofMap() = default;
  DofMap(int cells, int m, int y_functions, int sigma_functions, int geometry_degree,
         bool moving);

  int size() const { return size_; }
  bool moving() const { return moving_; }
  int y_index(int c, int k, int i) const { return block_[c] + y_offset_ + k * ny_ + i; }
  int sigma_index(int c, int k, int i) const {
    return block_[c] + sigma_offset_ + k * ns_ + i;
  }
  /// Unknown index of a global geometry dof, or -1 when it is not an unknown.
  int geometry_index(int geometry_dof) const { return geometry_[geometry_dof]; }
  DofKind kind(int unknown) const { return kinds_[unknown]; }
  /// Geometry dof behind a geometry unknown (-1 for the other kinds).
  int geometry_dof_of(int unknown) const { return geometry_dof_of_[unknown]; }

 private:
  int size_ = 0;
  bool moving_ = false;
  int ny_ = 0, ns_ = 0;
  int y_offset_ = 0, sigma_offset_ = 0;
  std::vector<int> block_;
  std::vector<int> geometry_;
  std::vector<DofKind> kinds_;
  std::vector<int> geometry_dof_of_;
};

struct DiscretizationOptions {
  int degree_y = 2;
  int degree_sigma = -1;    // -1: same as degree_y
  int degree_u = -1;        // -1: isoparametric
  int quadrature_points = 0;  // 0: p_max + p_u + 2
};

class Discretization {
 public:
  Discretization(Problem problem, int cell_count, const DiscretizationOptions& options);

  const Problem& problem() const { return problem_; }
  const FluxModel& model() const { return *problem_.model; }
  const ReferenceMesh& mesh() const { return mesh_; }
  int cell_count() const { return mesh_.cell_count(); }
  int components() const { return model().components(); }
  bool viscous() const { return model().viscous(); }
  int degree_y() const { return basis_y_.degree(); }
  int degree_sigma() const { return basis_sigma_.degree(); }
  int degree_u() const { return degree_u_; }

  const PolyBasis& basis_y() const { return basis_y_; }
  const PolyBasis& basis_sigma() const { return basis_sigma_; }
  const QuadratureRule& quadrature() const { return quad_; }
  const BasisTable& y_table() const { return y_table_; }
  const BasisTable& sigma_table() const { return sigma_table_; }
  const BasisTable& geometry_table() const { return geometry_table_; }
  /// Tables at the end points: row 0 is xi = 0, row 1 is xi = 1.
  const BasisTable& y_trace() const { return y_trace_; }
  const BasisTable& sigma_trace() const { return sigma_trace_; }

  const DofMap& dof_map(bool moving) const { return moving ? moving_map_ : static_map_; }

  FieldState zero_state() const;
  GeometryField uniform_geometry(double x_left, double x_right) const;

  int conservation_rows() const { return cell_count() * quad_.size() * components(); }
  int constitutive_rows() const { return viscous() ? conservation_rows() : 0; }
  int interface_rows() const { return mesh_.interface_count() * components(); }
  int state_rows() const { return viscous() ? interface_rows() : 0; }
  int residual_size() const {
    return conservation_rows() + constitutive_rows() + interface_rows() + state_rows();
  }

 private:
  Problem problem_;
  ReferenceMesh mesh_;
  int degree_u_;
  PolyBasis basis_y_;
  PolyBasis basis_sigma_;
  QuadratureRule quad_;
  BasisTable y_table_, sigma_table_, geometry_table_;
  BasisTable y_trace_, sigma_trace_;
  DofMap static_map_, moving_map_;
};

/// Value of y (or sigma) on cell c at reference coordinate xi.
Vec evaluate_state(const Discretization& disc, const FieldState& s, int cell, double xi);
Vec evaluate_sigma(const Discretization& disc, const FieldState& s, int cell, double xi);

struct ResidualSystem {
  Eigen::VectorXd r;
  Eigen::SparseMatrix<double, Eigen::RowMajor> J;  // empty for residual-only assembly
  int conservation_offset = 0;
  int constitutive_offset = 0;
  int flux_offset = 0;
  int state_offset = 0;
};

/// Residual and, when requested, Jacobian. Without `moving` the geometry
/// columns are omitted. Throws GeometryError for a non-positive u' and
/// AdmissibilityError for an inadmissible sample.
ResidualSystem assemble(const Discretization& disc, const GeometryField& g, const FieldState& s,
                        bool moving, bool with_jacobian = true);

/// 1/2 r^T r.
double objective(const ResidualSystem& rs);
double objective(const Eigen::VectorXd& r);

/// Flat unknown vector and its inverse.
Eigen::VectorXd pack_unknowns(const DofMap& map, const FieldState& s, const GeometryField& g);
/// s and g advanced by alpha * delta; geometry goes through the boundary
/// projection.
void apply_increment(const DofMap& map, const Eigen::VectorXd& delta, double alpha,
                     FieldState& s, GeometryField& g);

/// Split every cell of (s, g) at its reference midpoint. The result lives on
/// `fine`, which must have twice the cells and the same degrees, and
/// represents the same piecewise polynomials, so the geometry and fields are
/// reproduced exactly.
std::pair<FieldState, GeometryField> bisect_cells(const Discretization& coarse,
                                                  const FieldState& s, const GeometryField& g,
                                                  const Discretization& fine);

/// Max |J - J_fd| over max |J|, with central differences of step h.
double jacobian_check(const Discretization& disc, const GeometryField& g, const FieldState& s,
                      bool moving, double h = 1e-6);

/// Rectangular linear system for the discrete least-squares study of pure
/// advection: rows integrate (d/dxi F(y) - u' f) against a nodal test basis
/// of degree test_degree on each cell, followed by an inflow row and one
/// jump row per interior interface. Columns are the y coefficients.
struct DlsSystem {
  Eigen::SparseMatrix<double> B;
  Eigen::VectorXd rhs;
};
DlsSystem assemble_dls(const Discretization& disc, const GeometryField& g, int test_degree);

}  // namespace lsmdg
