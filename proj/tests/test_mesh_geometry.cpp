#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lsmdg/errors.hpp"
#include "lsmdg/mesh_geometry.hpp"

using namespace lsmdg;

namespace {

// Degree-2 interpolant through (0, a), (1/2, b), (1, c) and its derivative.
double quad_value(double a, double b, double c, double xi) {
  return a * 2.0 * (xi - 0.5) * (xi - 1.0) - b * 4.0 * xi * (xi - 1.0) + c * 2.0 * xi * (xi - 0.5);
}
double quad_derivative(double a, double b, double c, double xi) {
  return a * (4.0 * xi - 3.0) - b * (8.0 * xi - 4.0) + c * (4.0 * xi - 1.0);
}

}  // namespace

TEST_CASE("reference mesh interfaces") {
  for (int n : {1, 2, 5}) {
    const ReferenceMesh mesh(n);
    CHECK(mesh.interface_count() == n + 1);
    int interior = 0;
    for (int e = 0; e <= n; ++e) {
      const Interface& f = mesh.interface(e);
      if (!f.boundary()) {
        ++interior;
        CHECK(f.left_cell == e - 1);
        CHECK(f.right_cell == e);
      }
    }
    CHECK(interior == n - 1);
    CHECK(mesh.interface(0).left_cell == -1);
    CHECK(mesh.interface(0).right_cell == 0);
    CHECK(mesh.interface(n).left_cell == n - 1);
    CHECK(mesh.interface(n).right_cell == -1);
  }
  CHECK_THROWS_AS(ReferenceMesh(0), ConfigError);
}

TEST_CASE("identity and affine mappings") {
  const GeometryField id = GeometryField::uniform(1, 1, 0.0, 1.0);
  const MappingSample a = evaluate_mapping(id, 0, 0.5);
  CHECK(a.x == doctest::Approx(0.5));
  CHECK(a.du == doctest::Approx(1.0));

  const GeometryField wide = GeometryField::uniform(1, 1, 0.0, 2.0);
  const MappingSample b = wide.evaluate_mapping(0, 0.25);
  CHECK(b.x == doctest::Approx(0.5));
  CHECK(b.du == doctest::Approx(2.0));
}

TEST_CASE("quadratic mapping matches the Lagrange interpolant") {
  const GeometryField g(1, 2, {0.0, 0.3, 1.0}, {0.0, 1.0});
  for (double xi : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const MappingSample s = g.evaluate_mapping(0, xi);
    CHECK(std::abs(s.x - quad_value(0.0, 0.3, 1.0, xi)) < 1e-14);
    CHECK(std::abs(s.du - quad_derivative(0.0, 0.3, 1.0, xi)) < 1e-13);
  }
  const MappingSample mid = g.evaluate_mapping(0, 0.5);
  CHECK(mid.x == doctest::Approx(0.3));
  CHECK(mid.du == doctest::Approx(1.0));
}

TEST_CASE("validity report") {
  const QuadratureRule q = gauss_rule(4);
  CHECK(check_validity(GeometryField::uniform(1, 1, 0.0, 1.0), q).min_jacobian ==
        doctest::Approx(1.0));

  // u' = 2.6 - 3.2 xi changes sign inside the cell.
  const GeometryField folded(1, 2, {0.0, 0.9, 1.0}, {0.0, 1.0});
  const ValidityReport r = folded.check_validity(q);
  CHECK(r.min_jacobian < 0.0);
  CHECK(r.worst_cell == 0);
  CHECK(r.min_jacobian == doctest::Approx(quad_derivative(0.0, 0.9, 1.0, 1.0)));

  const GeometryField two = GeometryField::from_vertices({0.0, 0.7, 1.0}, 1);
  const ValidityReport t = two.check_validity(q);
  CHECK(t.min_jacobian == doctest::Approx(0.3));
  CHECK(t.worst_cell == 1);
}

TEST_CASE("validity tolerance scales with the mean cell length") {
  const GeometryField g = GeometryField::uniform(4, 2, -1.0, 1.0);
  CHECK(g.validity_tolerance() == doctest::Approx(1e-10 * 0.5));
}

TEST_CASE("boundary projection") {
  GeometryField g = GeometryField::uniform(3, 2, 0.0, 1.0);
  const std::vector<double> before(g.dofs().begin(), g.dofs().end());
  const GeometryField same = project_boundary(g);
  CHECK(std::equal(before.begin(), before.end(), same.dofs().begin()));

  g.dofs()[g.dof_count() - 1] = 1.01;
  g.dofs()[0] = -0.2;
  g.dofs()[3] += 0.05;
  const GeometryField p = g.project_boundary();
  CHECK(p.dofs()[0] == 0.0);
  CHECK(p.dofs()[p.dof_count() - 1] == 1.0);
  int changed = 0;
  for (int i = 0; i < g.dof_count(); ++i) changed += g.dofs()[i] != p.dofs()[i];
  CHECK(changed == 2);
  const GeometryField pp = p.project_boundary();
  CHECK(std::equal(p.dofs().begin(), p.dofs().end(), pp.dofs().begin()));

  std::vector<double> dv(g.dof_count(), 1.0);
  g.project_boundary_derivative(dv);
  for (int i = 0; i < g.dof_count(); ++i)
    CHECK(dv[i] == ((i == 0 || i == g.dof_count() - 1) ? 0.0 : 1.0));
}

TEST_CASE("cell volumes") {
  const QuadratureRule q = gauss_rule(3);
  const GeometryField affine = GeometryField::from_vertices({0.0, 0.25, 0.75, 1.0}, 1);
  CHECK(cell_volume(affine, 1, q) == doctest::Approx(0.5));
  CHECK(GeometryField::uniform(1, 1, 0.0, 1.0).cell_volume(0, q) == doctest::Approx(1.0));
  const GeometryField curved(1, 2, {0.0, 0.3, 1.0}, {0.0, 1.0});
  CHECK(curved.cell_volume(0, q) == doctest::Approx(1.0));
}

TEST_CASE("volumes of a perturbed curved mesh telescope to the domain length") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int p = 1; p <= 4; ++p) {
    GeometryField g = GeometryField::uniform(6, p, -0.5, 1.5);
    const double h = 2.0 / (6 * p);
    for (int i = 1; i + 1 < g.dof_count(); ++i) g.dofs()[i] += jitter(rng) * h;
    const QuadratureRule q = gauss_rule(p + 1);
    double total = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) total += g.cell_volume(c, q);
    CHECK(std::abs(total - 2.0) < 1e-13 * 2.0);
  }
}

TEST_CASE("affine cells have constant Jacobian equal to their length") {
  const std::vector<double> v{0.0, 0.1, 0.45, 0.5, 1.0};
  for (int p = 1; p <= 3; ++p) {
    const GeometryField g = GeometryField::from_vertices(v, p);
    for (int c = 0; c < 4; ++c)
      for (double xi : {0.0, 0.3, 0.77, 1.0})
        CHECK(std::abs(g.evaluate_mapping(c, xi).du - (v[c + 1] - v[c])) < 1e-14);
    CHECK(g.vertices() == v);
  }
}

TEST_CASE("mapping is continuous across cells") {
  GeometryField g = GeometryField::uniform(4, 3, 0.0, 1.0);
  g.dofs()[2] += 0.01;
  g.dofs()[5] -= 0.02;
  for (int c = 0; c + 1 < 4; ++c)
    CHECK(g.evaluate_mapping(c, 1.0).x == doctest::Approx(g.evaluate_mapping(c + 1, 0.0).x));
}

TEST_CASE("geometry csv round trip") {
  GeometryField g = GeometryField::uniform(3, 2, 0.0, 1.0);
  g.dofs()[1] = 0.123456789012345678;
  std::stringstream ss;
  write_geometry_csv(ss, g);
  std::string header;
  std::getline(std::istringstream(ss.str()), header);
  CHECK(header == "cell_id,local_index,x");
  const GeometryField back = read_geometry_csv(ss, {0.0, 1.0});
  REQUIRE(back.dof_count() == g.dof_count());
  CHECK(back.degree() == 2);
  for (int i = 0; i < g.dof_count(); ++i) CHECK(back.dofs()[i] == g.dofs()[i]);
}
