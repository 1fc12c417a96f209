// Exact and reference solutions, L2 projection, error norms and observed
// convergence rates.
#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lsmdg/assembly.hpp"
#include "lsmdg/physics.hpp"

namespace lsmdg {

using ExactSolution = std::function<Vec(double)>;

/// (1 - exp(x Pe)) / (1 - exp(Pe)); rescaled by exp(-Pe) for Pe > 30.
double boundary_layer_exact(double peclet, double x);
/// Closed form without the rescaling, for comparison.
double boundary_layer_exact_naive(double peclet, double x);

/// Stationary viscous Burgers shock with y_R = -y_L centred at x = 0.
double burgers_exact(double viscosity, double y_left, double x);

/// (x-.1)(x-.2)(x-.3)(x-.4)(x-.5)(x-.9) and its first two derivatives.
double ode_polynomial(double x);
double ode_polynomial_derivative(double x);
double ode_polynomial_second_derivative(double x);

struct ShockState {
  double rho;
  double v;
  double temperature;
};

/// Downstream state of a steady normal shock with upstream (1, M, 1).
ShockState normal_shock_downstream(const NavierStokesParameters& params);

/// Tabulated viscous shock profile on an ascending uniform grid, anchored so
/// that v is the mean of the end velocities at x = 0. End states are held
/// constant outside the tabulated window.
class ShockProfile {
 public:
  ShockProfile(std::vector<double> x, std::vector<double> v, std::vector<double> temperature,
               double mass_flux, ShockState upstream, ShockState downstream);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& v() const { return v_; }
  const std::vector<double>& temperature() const { return temperature_; }
  double mass_flux() const { return mass_flux_; }
  const ShockState& upstream() const { return upstream_; }
  const ShockState& downstream() const { return downstream_; }

  /// Linear interpolation of (rho, v, T).
  ShockState evaluate(double x) const;
  double density(double x) const { return evaluate(x).rho; }

  /// CSV with header "x,rho,v,T", 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> x_, v_, temperature_;
  double mass_flux_;
  ShockState upstream_, downstream_;
};

/// RK4 integration of the once-integrated steady momentum and energy
/// equations in (v, T), started on the stable manifold of the downstream
/// state and run backward in x to the upstream state. Throws OracleError if
/// the upstream state is not reached.
ShockProfile ns_shock_ode_oracle(const NavierStokesParameters& params, double step = 1e-4);

/// Physical-space L2 error of component `component` over the mapped cells.
double l2_error(const Discretization& disc, const FieldState& s, const GeometryField& g,
                const ExactSolution& exact, int component = 0);
double l2_error(const Discretization& disc, const FieldState& s, const GeometryField& g,
                const ExactSolution& exact, const QuadratureRule& quad, int component = 0);

/// Cellwise L2 projection of y in the mapped inner product; sigma is zero.
FieldState l2_project(const Discretization& disc, const GeometryField& g,
                      const ExactSolution& exact);
FieldState l2_project(const Discretization& disc, const GeometryField& g,
                      const ExactSolution& exact, const QuadratureRule& quad);

/// Pairwise rates log(e_i / e_{i+1}) / log(h_i / h_{i+1}). Throws ConfigError
/// for fewer than two entries or non-positive values.
std::vector<double> convergence_rate(const std::vector<std::pair<double, double>>& errors);

struct ShiftAlignment {
  double shift;  // oracle evaluated at x - shift
  double error;  // max |computed - oracle| over the samples
};

/// Shift minimizing the max mismatch between values[i] and
/// reference(samples[i] - shift), searched in [lo, hi].
ShiftAlignment align_shift(const std::vector<double>& samples, const std::vector<double>& values,
                           const std::function<double(double)>& reference, double lo, double hi);

}  // namespace lsmdg
