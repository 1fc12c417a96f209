#include "lsmdg/mesh_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

ReferenceMesh::ReferenceMesh(int cell_count) : cell_count_(cell_count) {
  if (cell_count < 1) throw ConfigError("ReferenceMesh: cell_count must be positive");
  interfaces_.reserve(cell_count + 1);
  interfaces_.push_back({-1, 0});
  for (int c = 0; c + 1 < cell_count; ++c) interfaces_.push_back({c, c + 1});
  interfaces_.push_back({cell_count - 1, -1});
}

GeometryField::GeometryField(int cell_count, int degree, std::vector<double> dofs,
                             std::pair<double, double> bounds)
    : cell_count_(cell_count),
      degree_(degree),
      dofs_(std::move(dofs)),
      bounds_(bounds),
      basis_(degree, BasisKind::nodal_lobatto) {
  if (degree < 1) throw ConfigError("GeometryField: degree must be at least 1");
  if (cell_count < 1) throw ConfigError("GeometryField: cell_count must be positive");
  if (static_cast<int>(dofs_.size()) != cell_count * degree + 1) {
    throw ConfigError("GeometryField: expected cell_count * degree + 1 dofs");
  }
}

GeometryField GeometryField::from_vertices(const std::vector<double>& vertices, int degree) {
  if (vertices.size() < 2) throw ConfigError("GeometryField: need at least two vertices");
  const int cells = static_cast<int>(vertices.size()) - 1;
  const std::vector<double> nodes = gauss_lobatto_points(degree);
  std::vector<double> dofs(cells * degree + 1);
  for (int c = 0; c < cells; ++c) {
    const double a = vertices[c];
    const double b = vertices[c + 1];
    for (int k = 0; k <= degree; ++k) dofs[c * degree + k] = a + (b - a) * nodes[k];
  }
  dofs.back() = vertices.back();
  return GeometryField(cells, degree, std::move(dofs), {vertices.front(), vertices.back()});
}

GeometryField GeometryField::uniform(int cell_count, int degree, double x_left, double x_right) {
  std::vector<double> v(cell_count + 1);
  for (int i = 0; i <= cell_count; ++i) {
    v[i] = x_left + (x_right - x_left) * static_cast<double>(i) / cell_count;
  }
  v.back() = x_right;
  return from_vertices(v, degree);
}

std::vector<double> GeometryField::vertices() const {
  std::vector<double> v(cell_count_ + 1);
  for (int i = 0; i <= cell_count_; ++i) v[i] = vertex(i);
  return v;
}

MappingSample GeometryField::evaluate_mapping(int cell, double xi) const {
  std::vector<double> values(degree_ + 1);
  std::vector<double> derivs(degree_ + 1);
  basis_.evaluate(xi, values.data(), derivs.data());
  MappingSample s{0.0, 0.0};
  for (int k = 0; k <= degree_; ++k) {
    s.x += dofs_[local_dof(cell, k)] * values[k];
    s.du += dofs_[local_dof(cell, k)] * derivs[k];
  }
  return s;
}

ValidityReport GeometryField::check_validity(const QuadratureRule& quad) const {
  ValidityReport report{std::numeric_limits<double>::infinity(), -1};
  std::vector<double> points = quad.points;
  points.push_back(0.0);
  points.push_back(1.0);
  for (int c = 0; c < cell_count_; ++c) {
    for (double xi : points) {
      const double du = evaluate_mapping(c, xi).du;
      if (du < report.min_jacobian) report = {du, c};
    }
  }
  return report;
}

GeometryField GeometryField::project_boundary() const {
  GeometryField g = *this;
  g.dofs_.front() = bounds_.first;
  g.dofs_.back() = bounds_.second;
  return g;
}

void GeometryField::project_boundary_derivative(std::span<double> perturbation) const {
  perturbation.front() = 0.0;
  perturbation.back() = 0.0;
}

double GeometryField::cell_volume(int cell, const QuadratureRule& quad) const {
  double volume = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    volume += quad.weights[q] * evaluate_mapping(cell, quad.points[q]).du;
  }
  return volume;
}

double GeometryField::validity_tolerance() const {
  return 1e-10 * (bounds_.second - bounds_.first) / cell_count_;
}

void write_geometry_csv(std::ostream& out, const GeometryField& g) {
  out << "cell_id,local_index,x\n";
  out << std::setprecision(17);
  for (int c = 0; c < g.cell_count(); ++c) {
    for (int k = 0; k <= g.degree(); ++k) {
      out << c << ',' << k << ',' << g.dofs()[g.local_dof(c, k)] << '\n';
    }
  }
}

GeometryField read_geometry_csv(std::istream& in, std::pair<double, double> bounds) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("cell_id,local_index,x", 0) != 0) {
    throw ConfigError("geometry csv: missing header");
  }
  std::map<std::pair<int, int>, double> entries;
  int max_cell = -1;
  int max_local = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw ConfigError("geometry csv: malformed row '" + line + "'");
    }
    const int cell = std::stoi(a);
    const int local = std::stoi(b);
    entries[{cell, local}] = std::stod(c);
    max_cell = std::max(max_cell, cell);
    max_local = std::max(max_local, local);
  }
  const int cells = max_cell + 1;
  const int degree = max_local;
  if (cells < 1 || degree < 1 ||
      static_cast<int>(entries.size()) != cells * (degree + 1)) {
    throw ConfigError("geometry csv: incomplete dof table");
  }
  std::vector<double> dofs(cells * degree + 1);
  for (const auto& [key, x] : entries) dofs[key.first * degree + key.second] = x;
  return GeometryField(cells, degree, std::move(dofs), bounds);
}

}  // namespace lsmdg
