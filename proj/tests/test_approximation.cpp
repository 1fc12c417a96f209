#include <doctest.h>

#include <cmath>
#include <random>

#include "lsmdg/approximation.hpp"
#include "lsmdg/errors.hpp"

using namespace lsmdg;

TEST_CASE("one-point rule is the midpoint rule") {
  const QuadratureRule q = gauss_rule(1);
  REQUIRE(q.size() == 1);
  CHECK(q.points[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-point rule nodes and weights") {
  const QuadratureRule q = gauss_rule(2);
  REQUIRE(q.size() == 2);
  const double d = 1.0 / (2.0 * std::sqrt(3.0));
  CHECK(std::abs(q.points[0] - (0.5 - d)) < 1e-15);
  CHECK(std::abs(q.points[1] - (0.5 + d)) < 1e-15);
  CHECK(std::abs(q.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(q.weights[1] - 0.5) < 1e-15);
  double cubic = 0.0;
  for (int i = 0; i < 2; ++i) cubic += q.weights[i] * std::pow(q.points[i], 3);
  CHECK(std::abs(cubic - 0.25) < 1e-16);
}

TEST_CASE("rule size outside 1..64 is rejected") {
  CHECK_THROWS_AS(gauss_rule(0), ConfigError);
  CHECK_THROWS_AS(gauss_rule(65), ConfigError);
  CHECK_NOTHROW(gauss_rule(64));
}

TEST_CASE("quadrature is exact for random polynomials up to degree 2n-1") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int n = 1; n <= 20; ++n) {
    const QuadratureRule q = gauss_rule(n);
    CHECK(q.exact_degree == 2 * n - 1);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(q.weights[i] > 0.0);
      CHECK(q.points[i] > 0.0);
      CHECK(q.points[i] < 1.0);
      if (i > 0) CHECK(q.points[i] > q.points[i - 1]);
      wsum += q.weights[i];
    }
    CHECK(std::abs(wsum - 1.0) < 1e-14);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(2 * n);
      for (double& v : c) v = coeff(rng);
      double exact = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        exact += c[k] / (k + 1.0);
        scale += std::abs(c[k]) / (k + 1.0);
      }
      double approx = 0.0;
      for (int i = 0; i < n; ++i) {
        double p = 0.0;
        for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) p = p * q.points[i] + c[k];
        approx += q.weights[i] * p;
      }
      CHECK(std::abs(approx - exact) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("modal degree zero is the constant one") {
  const PolyBasis b(0, BasisKind::modal_legendre);
  for (double xi : {0.0, 0.3, 1.0}) {
    const auto s = basis_eval(b, xi);
    REQUIRE(s.size() == 1);
    CHECK(s[0].value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[0].derivative == 0.0);
  }
}

TEST_CASE("nodal degree one gives the linear hats") {
  const PolyBasis b(1, BasisKind::nodal_lobatto);
  const auto s = basis_eval(b, 0.0);
  REQUIRE(s.size() == 2);
  CHECK(s[0].value == doctest::Approx(1.0));
  CHECK(std::abs(s[1].value) < 1e-15);
  CHECK(s[0].derivative == doctest::Approx(-1.0));
  CHECK(s[1].derivative == doctest::Approx(1.0));
}

TEST_CASE("modal basis is orthonormal") {
  SUBCASE("degree 2 with five points") {
    const PolyBasis b(2, BasisKind::modal_legendre);
    const QuadratureRule q = gauss_rule(5);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double g = 0.0;
        for (int k = 0; k < q.size(); ++k) {
          const auto s = b.evaluate(q.points[k]);
          g += q.weights[k] * s[i].value * s[j].value;
        }
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-14);
      }
  }
  SUBCASE("degrees up to 8") {
    const QuadratureRule q = gauss_rule(10);
    for (int p = 0; p <= 8; ++p) {
      const PolyBasis b(p, BasisKind::modal_legendre);
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) {
          double g = 0.0;
          for (int k = 0; k < q.size(); ++k) {
            const auto s = b.evaluate(q.points[k]);
            g += q.weights[k] * s[i].value * s[j].value;
          }
          CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-13);
        }
    }
  }
}

TEST_CASE("basis derivatives match central differences") {
  const double h = 1e-5;
  for (BasisKind kind : {BasisKind::modal_legendre, BasisKind::nodal_lobatto})
    for (int p = 0; p <= 6; ++p) {
      const PolyBasis b(p, kind);
      for (double xi : {0.1, 0.37, 0.5, 0.81, 0.95}) {
        const auto s = b.evaluate(xi);
        const auto sp = b.evaluate(xi + h);
        const auto sm = b.evaluate(xi - h);
        for (int i = 0; i <= p; ++i) {
          const double fd = (sp[i].value - sm[i].value) / (2.0 * h);
          CHECK(std::abs(fd - s[i].derivative) < 1e-7 * std::max(1.0, std::abs(s[i].derivative)));
        }
      }
    }
}

TEST_CASE("nodal basis interpolates at the Lobatto points") {
  for (int p = 1; p <= 6; ++p) {
    const PolyBasis b(p, BasisKind::nodal_lobatto);
    const auto& nodes = b.nodes();
    REQUIRE(static_cast<int>(nodes.size()) == p + 1);
    CHECK(nodes.front() == 0.0);
    CHECK(nodes.back() == 1.0);
    for (int i = 0; i <= p; ++i) {
      CHECK(std::abs(nodes[i] + nodes[p - i] - 1.0) < 1e-14);
      const auto s = b.evaluate(nodes[i]);
      for (int j = 0; j <= p; ++j) CHECK(std::abs(s[j].value - (i == j ? 1.0 : 0.0)) < 1e-13);
    }
  }
  CHECK(gauss_lobatto_points(0) == std::vector<double>{0.5});
}

TEST_CASE("quadratic Lobatto nodes are the end points and the midpoint") {
  const auto nodes = gauss_lobatto_points(2);
  REQUIRE(nodes.size() == 3);
  CHECK(std::abs(nodes[1] - 0.5) < 1e-15);
}

TEST_CASE("basis table matches direct evaluation") {
  const PolyBasis b(3, BasisKind::modal_legendre);
  const QuadratureRule q = gauss_rule(4);
  const BasisTable t(b, q.points);
  CHECK(t.functions() == 4);
  CHECK(t.points() == 4);
  for (int k = 0; k < q.size(); ++k) {
    const auto s = b.evaluate(q.points[k]);
    for (int i = 0; i < 4; ++i) {
      CHECK(t.value(k, i) == s[i].value);
      CHECK(t.derivative(k, i) == s[i].derivative);
    }
  }
}

TEST_CASE("Legendre values at the end points") {
  std::vector<double> v, d;
  legendre_values(5, 1.0, v, d);
  for (int k = 0; k <= 5; ++k) {
    CHECK(v[k] == doctest::Approx(1.0));
    CHECK(d[k] == doctest::Approx(0.5 * k * (k + 1)));
  }
}
