#include "lsmdg/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

double boundary_layer_exact(double peclet, double x) {
  if (!(peclet > 0.0)) throw ConfigError("Peclet number must be positive");
  if (peclet > 30.0)
    return (std::exp((x - 1.0) * peclet) - std::exp(-peclet)) / (1.0 - std::exp(-peclet));
  return std::expm1(x * peclet) / std::expm1(peclet);
}

double boundary_layer_exact_naive(double peclet, double x) {
  return (1.0 - std::exp(x * peclet)) / (1.0 - std::exp(peclet));
}

double burgers_exact(double viscosity, double y_left, double x) {
  if (!(viscosity > 0.0)) throw ConfigError("Burgers viscosity must be positive");
  const double y_right = -y_left;
  const double jump = y_left - y_right;
  return y_right + 0.5 * jump * (1.0 - std::tanh(jump * x / (4.0 * viscosity)));
}

namespace {
constexpr double kRoots[6] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.9};
}

double ode_polynomial(double x) {
  double y = 1.0;
  for (double r : kRoots) y *= x - r;
  return y;
}

double ode_polynomial_derivative(double x) {
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    double term = 1.0;
    for (int j = 0; j < 6; ++j)
      if (j != i) term *= x - kRoots[j];
    sum += term;
  }
  return sum;
}

double ode_polynomial_second_derivative(double x) {
  double sum = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (j == i) continue;
      double term = 1.0;
      for (int k = 0; k < 6; ++k)
        if (k != i && k != j) term *= x - kRoots[k];
      sum += term;
    }
  return sum;
}

ShockState normal_shock_downstream(const NavierStokesParameters& params) {
  const double g = params.gamma;
  const double m2 = params.mach * params.mach;
  const double rho = (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  const double pressure_ratio = 1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0);
  // Upstream rho = T = 1, so T2 / T1 = (p2 / p1) / (rho2 / rho1).
  return {rho, params.mach / rho, pressure_ratio / rho};
}

ShockProfile::ShockProfile(std::vector<double> x, std::vector<double> v,
                           std::vector<double> temperature, double mass_flux,
                           ShockState upstream, ShockState downstream)
    : x_(std::move(x)),
      v_(std::move(v)),
      temperature_(std::move(temperature)),
      mass_flux_(mass_flux),
      upstream_(upstream),
      downstream_(downstream) {}

ShockState ShockProfile::evaluate(double x) const {
  if (x <= x_.front()) return upstream_;
  if (x >= x_.back()) return downstream_;
  const double h = x_[1] - x_[0];
  const auto i = std::min(static_cast<std::size_t>((x - x_.front()) / h), x_.size() - 2);
  const double t = (x - x_[i]) / h;
  const double v = (1.0 - t) * v_[i] + t * v_[i + 1];
  const double temperature = (1.0 - t) * temperature_[i] + t * temperature_[i + 1];
  return {mass_flux_ / v, v, temperature};
}

void ShockProfile::write_csv(std::ostream& out) const {
  out << "x,rho,v,T\n" << std::setprecision(17);
  for (std::size_t i = 0; i < x_.size(); ++i)
    out << x_[i] << ',' << mass_flux_ / v_[i] << ',' << v_[i] << ',' << temperature_[i] << '\n';
}

ShockProfile ns_shock_ode_oracle(const NavierStokesParameters& params, double step) {
  if (!(step > 0.0)) throw ConfigError("oracle step must be positive");
  const NavierStokes1DModel model(params);
  const double R = model.gas_constant();
  const double cp = model.specific_heat_cp();
  const double a = 4.0 / 3.0 * model.viscosity();
  const double k = model.conductivity();

  const ShockState up{1.0, params.mach, 1.0};
  const ShockState down = normal_shock_downstream(params);
  const double mdot = up.rho * up.v;
  const double c1 = mdot * up.v + up.rho * R * up.temperature;
  const double c2 = mdot * (cp * up.temperature + 0.5 * up.v * up.v);

  auto rhs = [&](const Eigen::Vector2d& z) {
    const double v = z[0], T = z[1];
    const double p = mdot * R * T / v;
    const double excess = mdot * v + p - c1;
    return Eigen::Vector2d(excess / a, (mdot * (cp * T + 0.5 * v * v) - v * excess - c2) / k);
  };

  Eigen::Matrix2d jac;
  {
    const double v = down.v, T = down.temperature;
    jac(0, 0) = (mdot - mdot * R * T / (v * v)) / a;
    jac(0, 1) = (mdot * R / v) / a;
    jac(1, 0) = (c1 - mdot * v) / k;
    jac(1, 1) = mdot * (cp - R) / k;
  }
  Eigen::EigenSolver<Eigen::Matrix2d> eig(jac);
  int stable = -1;
  for (int i = 0; i < 2; ++i)
    if (std::abs(eig.eigenvalues()[i].imag()) == 0.0 && eig.eigenvalues()[i].real() < 0.0)
      stable = i;
  if (stable < 0) throw OracleError("downstream state is not a saddle");
  Eigen::Vector2d dir = eig.eigenvectors().col(stable).real().normalized();
  if (dir[0] < 0.0) dir = -dir;  // leave towards the faster upstream flow

  Eigen::Vector2d z(down.v + 1e-9 * dir[0] * down.v, down.temperature + 1e-9 * dir[1] * down.v);
  std::vector<double> vs{z[0]}, ts{z[1]};
  const double tol = 1e-11;
  const std::size_t max_steps = 20'000'000;
  const double h = -step;
  while (std::abs(z[0] - up.v) > tol * up.v || std::abs(z[1] - up.temperature) > tol) {
    const Eigen::Vector2d k1 = rhs(z);
    const Eigen::Vector2d k2 = rhs(z + 0.5 * h * k1);
    const Eigen::Vector2d k3 = rhs(z + 0.5 * h * k2);
    const Eigen::Vector2d k4 = rhs(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!z.allFinite() || z[0] <= 0.0 || z[0] > up.v * (1.0 + 1e-6) || vs.size() > max_steps)
      throw OracleError("viscous shock integration did not reach the upstream state");
    vs.push_back(z[0]);
    ts.push_back(z[1]);
  }
  std::reverse(vs.begin(), vs.end());
  std::reverse(ts.begin(), ts.end());

  const double v_mid = 0.5 * (up.v + down.v);
  double x_mid = 0.0;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    if (vs[i] >= v_mid && vs[i + 1] < v_mid) {
      x_mid = step * (static_cast<double>(i) + (vs[i] - v_mid) / (vs[i] - vs[i + 1]));
      break;
    }
  }
  std::vector<double> xs(vs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = step * static_cast<double>(i) - x_mid;
  return ShockProfile(std::move(xs), std::move(vs), std::move(ts), mdot, up, down);
}

namespace {

QuadratureRule error_rule(const Discretization& disc) {
  return gauss_rule(std::max(20, disc.degree_y() + disc.degree_u() + 8));
}

}  // namespace

double l2_error(const Discretization& disc, const FieldState& s, const GeometryField& g,
                const ExactSolution& exact, int component) {
  return l2_error(disc, s, g, exact, error_rule(disc), component);
}

double l2_error(const Discretization& disc, const FieldState& s, const GeometryField& g,
                const ExactSolution& exact, const QuadratureRule& quad, int component) {
  double sum = 0.0;
  for (int c = 0; c < s.cell_count; ++c)
    for (int q = 0; q < quad.size(); ++q) {
      const MappingSample map = g.evaluate_mapping(c, quad.points[q]);
      const double e = evaluate_state(disc, s, c, quad.points[q])[component] - exact(map.x)[component];
      sum += quad.weights[q] * map.du * e * e;
    }
  return std::sqrt(sum);
}

FieldState l2_project(const Discretization& disc, const GeometryField& g,
                      const ExactSolution& exact) {
  return l2_project(disc, g, exact, error_rule(disc));
}

FieldState l2_project(const Discretization& disc, const GeometryField& g,
                      const ExactSolution& exact, const QuadratureRule& quad) {
  FieldState s = disc.zero_state();
  const BasisTable table(disc.basis_y(), quad.points);
  const int n = s.y_size;
  const int m = s.components;
  for (int c = 0; c < s.cell_count; ++c) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
    for (int q = 0; q < quad.size(); ++q) {
      const MappingSample map = g.evaluate_mapping(c, quad.points[q]);
      const Vec y = exact(map.x);
      const double w = quad.weights[q] * map.du;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) += w * table.value(q, i) * table.value(q, j);
        for (int k = 0; k < m; ++k) b(i, k) += w * table.value(q, i) * y[k];
      }
    }
    const Eigen::MatrixXd coeffs = M.llt().solve(b);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) s.y_coeff(c, k, i) = coeffs(i, k);
  }
  return s;
}

std::vector<double> convergence_rate(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2) throw ConfigError("convergence rate needs at least two entries");
  for (const auto& [h, e] : errors)
    if (!(h > 0.0) || !(e > 0.0)) throw ConfigError("convergence rate needs positive values");
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    rates.push_back(std::log(errors[i].second / errors[i + 1].second) /
                    std::log(errors[i].first / errors[i + 1].first));
  return rates;
}

ShiftAlignment align_shift(const std::vector<double>& samples, const std::vector<double>& values,
                           const std::function<double(double)>& reference, double lo, double hi) {
  if (samples.size() != values.size()) throw ConfigError("align_shift: size mismatch");
  auto mismatch = [&](double shift) {
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
      worst = std::max(worst, std::abs(values[i] - reference(samples[i] - shift)));
    return worst;
  };
  const int coarse = 400;
  const double dh = (hi - lo) / coarse;
  ShiftAlignment best{lo, mismatch(lo)};
  for (int i = 1; i <= coarse; ++i) {
    const double s = lo + i * dh;
    const double e = mismatch(s);
    if (e < best.error) best = {s, e};
  }
  // Golden-section refinement inside the neighbouring coarse intervals.
  double a = std::max(lo, best.shift - dh), b = std::min(hi, best.shift + dh);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = mismatch(c), fd = mismatch(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - ratio * (b - a);
      fc = mismatch(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + ratio * (b - a);
      fd = mismatch(d);
    }
  }
  const double s = 0.5 * (a + b);
  const double e = mismatch(s);
  if (e < best.error) best = {s, e};
  return best;
}

}  // namespace lsmdg
