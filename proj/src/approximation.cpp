#include "lsmdg/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lsmdg/errors.hpp"

namespace lsmdg {

void legendre_values(int p, double t, std::vector<double>& values,
                     std::vector<double>& derivatives) {
  values.assign(p + 1, 0.0);
  derivatives.assign(p + 1, 0.0);
  values[0] = 1.0;
  if (p == 0) return;
  values[1] = t;
  derivatives[1] = 1.0;
  for (int k = 1; k < p; ++k) {
    values[k + 1] = ((2.0 * k + 1.0) * t * values[k] - k * values[k - 1]) / (k + 1.0);
    derivatives[k + 1] = derivatives[k - 1] + (2.0 * k + 1.0) * values[k];
  }
}

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > 64) {
    throw ConfigError("gauss_rule: point count must be in [1, 64], got " + std::to_string(n));
  }
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exact_degree = 2 * n - 1;
  std::vector<double> values;
  std::vector<double> derivs;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre_values(n, t, values, derivs);
      const double dt = values[n] / derivs[n];
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    legendre_values(n, t, values, derivs);
    // Ascending order on [0, 1].
    rule.points[n - 1 - i] = 0.5 * (t + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - t * t) * derivs[n] * derivs[n]);
  }
  return rule;
}

std::vector<double> gauss_lobatto_points(int p) {
  if (p < 0) throw ConfigError("gauss_lobatto_points: negative degree");
  if (p == 0) return {0.5};
  std::vector<double> nodes(p + 1);
  nodes[0] = 0.0;
  nodes[p] = 1.0;
  std::vector<double> values;
  std::vector<double> derivs;
  // Interior nodes are the roots of P_p'. Newton on P_p' using
  // P_p'' = (2t P_p' - p(p+1) P_p) / (1 - t^2).
  for (int i = 1; i < p; ++i) {
    double t = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      legendre_values(p, t, values, derivs);
      const double second = (2.0 * t * derivs[p] - p * (p + 1.0) * values[p]) / (1.0 - t * t);
      const double dt = derivs[p] / second;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    nodes[i] = 0.5 * (t + 1.0);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

PolyBasis::PolyBasis(int degree, BasisKind kind) : degree_(degree), kind_(kind) {
  if (degree < 0) throw ConfigError("PolyBasis: degree must be non-negative");
  if (kind_ == BasisKind::nodal_lobatto) {
    nodes_ = gauss_lobatto_points(degree_);
    denominators_.assign(degree_ + 1, 1.0);
    for (int i = 0; i <= degree_; ++i) {
      for (int j = 0; j <= degree_; ++j) {
        if (j != i) denominators_[i] *= nodes_[i] - nodes_[j];
      }
    }
  }
}

void PolyBasis::evaluate(double xi, double* values, double* derivatives) const {
  if (kind_ == BasisKind::modal_legendre) {
    std::vector<double> p;
    std::vector<double> dp;
    legendre_values(degree_, 2.0 * xi - 1.0, p, dp);
    for (int k = 0; k <= degree_; ++k) {
      const double scale = std::sqrt(2.0 * k + 1.0);
      values[k] = scale * p[k];
      derivatives[k] = 2.0 * scale * dp[k];
    }
    return;
  }
  const int n = degree_ + 1;
  for (int i = 0; i < n; ++i) {
    double value = 1.0;
    double derivative = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double term = 1.0;
      for (int k = 0; k < n; ++k) {
        if (k != i && k != j) term *= xi - nodes_[k];
      }
      derivative += term;
      value *= xi - nodes_[j];
    }
    values[i] = value / denominators_[i];
    derivatives[i] = derivative / denominators_[i];
  }
}

std::vector<BasisSample> PolyBasis::evaluate(double xi) const {
  std::vector<double> v(size());
  std::vector<double> d(size());
  evaluate(xi, v.data(), d.data());
  std::vector<BasisSample> out(size());
  for (int i = 0; i < size(); ++i) out[i] = {v[i], d[i]};
  return out;
}

BasisTable::BasisTable(const PolyBasis& basis, const std::vector<double>& points)
    : functions_(basis.size()), points_(static_cast<int>(points.size())) {
  values_.resize(static_cast<std::size_t>(functions_) * points_);
  derivatives_.resize(values_.size());
  for (int q = 0; q < points_; ++q) {
    basis.evaluate(points[q], &values_[q * functions_], &derivatives_[q * functions_]);
  }
}

}  // namespace lsmdg
