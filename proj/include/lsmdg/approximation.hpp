// Polynomial bases and Gauss quadrature on the unit reference interval.
#pragma once

#include <vector>

namespace lsmdg {

struct QuadratureRule {
  std::vector<double> points;   // in (0, 1), ascending
  std::vector<double> weights;  // positive, sum to 1
  int exact_degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with n points mapped to [0, 1]; exact for degree 2n-1.
/// Throws ConfigError unless 1 <= n <= 64.
QuadratureRule gauss_rule(int n);

/// Gauss-Lobatto points of a degree-p nodal basis on [0, 1] (p + 1 points).
/// Degree 0 yields the midpoint.
std::vector<double> gauss_lobatto_points(int p);

/// Value and first derivative of Legendre polynomials P_0..P_p at t in [-1, 1].
void legendre_values(int p, double t, std::vector<double>& values,
                     std::vector<double>& derivatives);

enum class BasisKind {
  modal_legendre,  // orthonormal in L2(0, 1)
  nodal_lobatto,   // Lagrange interpolants at the Gauss-Lobatto points
};

struct BasisSample {
  double value;
  double derivative;
};

class PolyBasis {
 public:
  PolyBasis(int degree, BasisKind kind);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  BasisKind kind() const { return kind_; }

  /// Interpolation nodes; empty for the modal basis.
  const std::vector<double>& nodes() const { return nodes_; }

  /// Values and reference derivatives of every basis function at xi.
  std::vector<BasisSample> evaluate(double xi) const;
  void evaluate(double xi, double* values, double* derivatives) const;

 private:
  int degree_;
  BasisKind kind_;
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// basis_eval as a free function.
inline std::vector<BasisSample> basis_eval(const PolyBasis& basis, double xi) {
  return basis.evaluate(xi);
}

/// Basis values and derivatives tabulated at the points of a quadrature rule.
class BasisTable {
 public:
  BasisTable() = default;
  BasisTable(const PolyBasis& basis, const std::vector<double>& points);

  int functions() const { return functions_; }
  int points() const { return points_; }
  double value(int q, int i) const { return values_[q * functions_ + i]; }
  double derivative(int q, int i) const { return derivatives_[q * functions_ + i]; }

 private:
  int functions_ = 0;
  int points_ = 0;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

}  // namespace lsmdg
