// One-dimensional reference partition and the continuous high-order mapping
// from the reference cells to physical space.
//
// Every cell is identified with the reference element [0, 1]. The mapping u
// is continuous and piecewise polynomial of degree p_u in a Gauss-Lobatto
// nodal basis, so its degrees of freedom are physical coordinates: shared
// vertex values plus p_u - 1 interior values per cell. In one dimension
// det(grad u) = u'(xi), cof(grad u) = 1 and the scaled interface normal is
// the orientation sign.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsmdg/approximation.hpp"

namespace lsmdg {

struct Interface {
  int left_cell;   // -1 on the left boundary
  int right_cell;  // -1 on the right boundary

  bool boundary() const { return left_cell < 0 || right_cell < 0; }
};

class ReferenceMesh {
 public:
  explicit ReferenceMesh(int cell_count);

  int cell_count() const { return cell_count_; }
  int interface_count() const { return cell_count_ + 1; }

  /// Interfaces ordered left to right: 0 is the left boundary, cell_count the
  /// right boundary. The cell on the left of an interface sees outward normal
  /// +1, the cell on the right sees -1.
  const Interface& interface(int e) const { return interfaces_[e]; }
  const std::vector<Interface>& interfaces() const { return interfaces_; }

 private:
  int cell_count_;
  std::vector<Interface> interfaces_;
};

struct MappingSample {
  double x;   // physical coordinate u(xi)
  double du;  // u'(xi) = det(grad u)
};

struct ValidityReport {
  double min_jacobian;
  int worst_cell;
};

class GeometryField {
 public:
  /// Affine mapping of the cells onto the given vertices (ascending).
  static GeometryField from_vertices(const std::vector<double>& vertices, int degree);
  static GeometryField uniform(int cell_count, int degree, double x_left, double x_right);

  /// Construct directly from nodal dofs (size cell_count * degree + 1).
  GeometryField(int cell_count, int degree, std::vector<double> dofs,
                std::pair<double, double> bounds);

  int cell_count() const { return cell_count_; }
  int degree() const { return degree_; }
  int dof_count() const { return static_cast<int>(dofs_.size()); }
  std::pair<double, double> bounds() const { return bounds_; }
  const PolyBasis& basis() const { return basis_; }

  std::span<const double> dofs() const { return dofs_; }
  std::span<double> dofs() { return dofs_; }

  /// Global dof index of local node k (0..degree) of a cell.
  int local_dof(int cell, int k) const { return cell * degree_ + k; }
  double vertex(int v) const { return dofs_[v * degree_]; }
  std::vector<double> vertices() const;

  MappingSample evaluate_mapping(int cell, double xi) const;

  /// Minimum of u' over the quadrature points and end points of every cell.
  ValidityReport check_validity(const QuadratureRule& quad) const;

  /// Copy with the end nodes reset to the domain bounds.
  GeometryField project_boundary() const;

  /// Derivative of project_boundary applied to a dof perturbation: zeroes the
  /// two boundary entries.
  void project_boundary_derivative(std::span<double> perturbation) const;

  double cell_volume(int cell, const QuadratureRule& quad) const;

  /// Validity threshold 1e-10 times the mean cell length.
  double validity_tolerance() const;

 private:
  int cell_count_;
  int degree_;
  std::vector<double> dofs_;
  std::pair<double, double> bounds_;
  PolyBasis basis_;
};

/// Free-function forms of the geometry operations.
inline MappingSample evaluate_mapping(const GeometryField& g, int cell, double xi) {
  return g.evaluate_mapping(cell, xi);
}
inline ValidityReport check_validity(const GeometryField& g, const QuadratureRule& quad) {
  return g.check_validity(quad);
}
inline GeometryField project_boundary(const GeometryField& g) { return g.project_boundary(); }
inline double cell_volume(const GeometryField& g, int cell, const QuadratureRule& quad) {
  return g.cell_volume(cell, quad);
}

/// Geometry CSV: header "cell_id,local_index,x", one row per (cell, local
/// node), 17 significant digits. Shared vertices appear in both cells.
void write_geometry_csv(std::ostream& out, const GeometryField& g);
GeometryField read_geometry_csv(std::istream& in, std::pair<double, double> bounds);

}  // namespace lsmdg
