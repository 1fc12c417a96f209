// Flux models for one-dimensional convection-diffusion systems written in
// first-order form with an auxiliary viscous variable sigma:
//
//   total flux      F(y, sigma) = Fc(y) - Fv~(y, sigma)
//   constitutive    sigma = G(y) dy/dx
//
// Each model is implemented once as templates over the scalar type and
// exposed through virtual overloads for the scalar types the assembly uses
// (plain doubles and the dual numbers of autodiff.hpp), so all
// linearizations are exact.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>

#include "lsmdg/autodiff.hpp"

namespace lsmdg {

inline constexpr int kMaxComponents = 3;
inline constexpr int kLocalDirections = 16;

template <class S>
using StateVec = std::array<S, kMaxComponents>;
using Vec = StateVec<double>;

namespace scalar {
using Xi = ad::Dual<double, 1>;                    // derivative along xi
using Jet = ad::Dual<double, kLocalDirections>;    // sensitivities to local variables
using JetXi = ad::Dual<Jet, 1>;
}  // namespace scalar

class FluxModel {
 public:
  virtual ~FluxModel() = default;

  virtual std::string name() const = 0;
  /// Number of conserved components m.
  virtual int components() const = 0;
  /// False for pure advection: no auxiliary variable and no constitutive law.
  virtual bool viscous() const = 0;
  /// Throws AdmissibilityError for states outside the admissible set.
  virtual void check_admissible(const Vec& y) const { (void)y; }

#define LSMDG_FLUX_MODEL_INTERFACE(S)                                                  \
  virtual StateVec<S> convective_flux(const StateVec<S>& y) const = 0;                 \
  virtual StateVec<S> viscous_flux(const StateVec<S>& y, const StateVec<S>& sigma)     \
      const = 0;                                                                       \
  virtual StateVec<S> constitutive(const StateVec<S>& y, const StateVec<S>& gradient)  \
      const = 0;

  LSMDG_FLUX_MODEL_INTERFACE(double)
  LSMDG_FLUX_MODEL_INTERFACE(scalar::Xi)
  LSMDG_FLUX_MODEL_INTERFACE(scalar::Jet)
  LSMDG_FLUX_MODEL_INTERFACE(scalar::JetXi)
#undef LSMDG_FLUX_MODEL_INTERFACE
};

/// Implements the virtual overloads of FluxModel by forwarding to the
/// templates convective<S>, viscous<S> and constitutive_law<S> of Derived.
template <class Derived>
class FluxModelBase : public FluxModel {
 public:
#define LSMDG_FLUX_MODEL_FORWARD(S)                                                         \
  StateVec<S> convective_flux(const StateVec<S>& y) const override {                        \
    return self().template convective<S>(y);                                                \
  }                                                                                         \
  StateVec<S> viscous_flux(const StateVec<S>& y, const StateVec<S>& sigma) const override { \
    return self().template viscous<S>(y, sigma);                                            \
  }                                                                                         \
  StateVec<S> constitutive(const StateVec<S>& y, const StateVec<S>& gradient)               \
      const override {                                                                      \
    return self().template constitutive_law<S>(y, gradient);                                \
  }

  LSMDG_FLUX_MODEL_FORWARD(double)
  LSMDG_FLUX_MODEL_FORWARD(scalar::Xi)
  LSMDG_FLUX_MODEL_FORWARD(scalar::Jet)
  LSMDG_FLUX_MODEL_FORWARD(scalar::JetXi)
#undef LSMDG_FLUX_MODEL_FORWARD

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Linear advection-diffusion: Fc = v y, G g = eps g, Fv~ = sigma.
/// eps = 0 gives pure advection with no auxiliary variable.
class AdvectionDiffusionModel : public FluxModelBase<AdvectionDiffusionModel> {
 public:
  AdvectionDiffusionModel(double velocity, double diffusivity);

  std::string name() const override { return "advection-diffusion"; }
  int components() const override { return 1; }
  bool viscous() const override { return diffusivity_ > 0.0; }
  double velocity() const { return velocity_; }
  double diffusivity() const { return diffusivity_; }

  template <class S>
  StateVec<S> convective(const StateVec<S>& y) const { return {velocity_ * y[0], S{}, S{}}; }
  template <class S>
  StateVec<S> viscous(const StateVec<S>&, const StateVec<S>& sigma) const {
    return {sigma[0], S{}, S{}};
  }
  template <class S>
  StateVec<S> constitutive_law(const StateVec<S>&, const StateVec<S>& g) const {
    return {diffusivity_ * g[0], S{}, S{}};
  }

 private:
  double velocity_;
  double diffusivity_;
};

/// Viscous Burgers: Fc = y^2 / 2, G g = eps g, Fv~ = sigma.
class BurgersModel : public FluxModelBase<BurgersModel> {
 public:
  explicit BurgersModel(double viscosity);

  std::string name() const override { return "burgers"; }
  int components() const override { return 1; }
  bool viscous() const override { return true; }
  double viscosity() const { return viscosity_; }

  template <class S>
  StateVec<S> convective(const StateVec<S>& y) const { return {0.5 * (y[0] * y[0]), S{}, S{}}; }
  template <class S>
  StateVec<S> viscous(const StateVec<S>&, const StateVec<S>& sigma) const {
    return {sigma[0], S{}, S{}};
  }
  template <class S>
  StateVec<S> constitutive_law(const StateVec<S>&, const StateVec<S>& g) const {
    return {viscosity_ * g[0], S{}, S{}};
  }

 private:
  double viscosity_;
};

/// Nondimensional freestream data for the 1D Navier-Stokes model. Density,
/// temperature and sound speed are 1 in the freestream, so the gas constant
/// is 1/gamma, the freestream velocity equals the Mach number and
/// mu = rho v L / Re with L = 1.
struct NavierStokesParameters {
  double gamma = 1.4;
  double mach = 3.5;
  double reynolds = 25.0;
  double prandtl = 0.72;
};

/// Compressible Navier-Stokes in one dimension with y = (rho, rho v, rho E),
/// constant viscosity, and the auxiliary variable scaled by mu_inf^{-1/2}:
///   G(y) dy = mu_inf^{-1/2} (0, tau, -q),  tau = 4/3 mu v_x,  q = -k T_x
///   Fv~(y, sigma) = mu_inf^{1/2} (sigma_0, sigma_1, sigma_1 v + sigma_2).
class NavierStokes1DModel : public FluxModelBase<NavierStokes1DModel> {
 public:
  explicit NavierStokes1DModel(const NavierStokesParameters& params = {});

  std::string name() const override { return "navier-stokes"; }
  int components() const override { return 3; }
  bool viscous() const override { return true; }
  void check_admissible(const Vec& y) const override;

  const NavierStokesParameters& parameters() const { return params_; }
  double gamma() const { return params_.gamma; }
  double gas_constant() const { return gas_constant_; }
  double viscosity() const { return viscosity_; }
  double conductivity() const { return conductivity_; }
  double freestream_viscosity() const { return viscosity_; }
  double specific_heat_cp() const { return gamma() * gas_constant_ / (gamma() - 1.0); }

  Vec conservative(double rho, double v, double temperature) const;
  /// (rho, v, T) from conservative variables.
  Vec primitive(const Vec& y) const;
  double pressure(const Vec& y) const;
  double temperature(const Vec& y) const;
  /// Stagnation enthalpy H = (rho E + p) / rho.
  double stagnation_enthalpy(const Vec& y) const;

  template <class S>
  StateVec<S> convective(const StateVec<S>& y) const {
    const S v = y[1] / y[0];
    const S p = (gamma() - 1.0) * (y[2] - 0.5 * (y[1] * v));
    return {y[1], y[1] * v + p, (y[2] + p) * v};
  }
  template <class S>
  StateVec<S> viscous(const StateVec<S>& y, const StateVec<S>& sigma) const {
    const S v = y[1] / y[0];
    return {sqrt_mu_inf_ * sigma[0], sqrt_mu_inf_ * sigma[1],
            sqrt_mu_inf_ * (sigma[1] * v + sigma[2])};
  }
  template <class S>
  StateVec<S> constitutive_law(const StateVec<S>& y, const StateVec<S>& g) const {
    const double gm1 = gamma() - 1.0;
    const S rho = y[0];
    const S v = y[1] / rho;
    const S p = gm1 * (y[2] - 0.5 * (y[1] * v));
    const S temperature = p / (gas_constant_ * rho);
    const S dv = (g[1] - v * g[0]) / rho;
    const S dp = gm1 * (g[2] - v * g[1] + 0.5 * (v * v) * g[0]);
    const S dtemperature = (dp - gas_constant_ * (temperature * g[0])) / (gas_constant_ * rho);
    const S tau = (4.0 / 3.0) * viscosity_ * dv;
    const S minus_q = conductivity_ * dtemperature;
    return {S{}, tau / sqrt_mu_inf_, minus_q / sqrt_mu_inf_};
  }

 private:
  NavierStokesParameters params_;
  double gas_constant_;
  double viscosity_;
  double conductivity_;
  double sqrt_mu_inf_;
};

/// Total flux F(y, sigma) = Fc(y) - Fv~(y, sigma). Checks admissibility.
Vec flux(const FluxModel& model, const Vec& y, const Vec& sigma);

/// G(y) g for a spatial-gradient sample g. Checks admissibility.
Vec constitutive_apply(const FluxModel& model, const Vec& y, const Vec& gradient);

/// Fc(y_L) - Fc(y_R): normal-flux jump of a steady inviscid discontinuity.
Vec rankine_hugoniot_defect(const FluxModel& model, const Vec& left, const Vec& right);

/// Exact linearizations at (y, sigma), each an m x m matrix.
struct FluxDerivatives {
  Eigen::MatrixXd convective_y;   // dFc/dy
  Eigen::MatrixXd viscous_y;      // dFv~/dy
  Eigen::MatrixXd viscous_sigma;  // dFv~/dsigma
  Eigen::MatrixXd constitutive;   // G(y) as a matrix acting on gradient samples

  /// (G'(y) dy) g as a matrix acting on dy.
  Eigen::MatrixXd constitutive_state_derivative(const Vec& gradient) const;

  const FluxModel* model = nullptr;
  Vec y{};
};

FluxDerivatives derivatives(const FluxModel& model, const Vec& y, const Vec& sigma);

enum class BoundaryKind {
  dirichlet,  // prescribed state: Fc and G from the boundary state, viscous flux from the interior
  outflow,    // interior convective flux with zero viscous flux; no state condition
};

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::dirichlet;
  Vec state{};
};

/// Flux-jump residual n (F(y, sigma) - F_boundary(y, sigma)) at a boundary
/// whose adjacent cell has outward normal `normal` (+1 or -1).
template <class S>
StateVec<S> boundary_flux_residual(const FluxModel& model, const BoundaryCondition& bc,
                                   double normal, const StateVec<S>& y,
                                   const StateVec<S>& sigma) {
  const int m = model.components();
  StateVec<S> out{};
  if (!model.viscous()) {
    if (bc.kind == BoundaryKind::outflow) return out;
    const StateVec<S> interior = model.convective_flux(y);
    const Vec fc = model.convective_flux(bc.state);
    for (int k = 0; k < m; ++k) out[k] = normal * (interior[k] - fc[k]);
    return out;
  }
  const StateVec<S> fc = model.convective_flux(y);
  const StateVec<S> fv = model.viscous_flux(y, sigma);
  if (bc.kind == BoundaryKind::outflow) {
    const StateVec<S> fv0 = model.viscous_flux(y, StateVec<S>{});
    for (int k = 0; k < m; ++k) out[k] = normal * (fv0[k] - fv[k]);
    return out;
  }
  StateVec<S> yb{};
  for (int k = 0; k < m; ++k) yb[k] = S(bc.state[k]);
  const Vec fcb = model.convective_flux(bc.state);
  const StateVec<S> fvb = model.viscous_flux(yb, sigma);
  for (int k = 0; k < m; ++k) out[k] = normal * ((fc[k] - fv[k]) - (fcb[k] - fvb[k]));
  return out;
}

/// State-continuity residual G_b(y) ((y - y_b) n) at a boundary.
template <class S>
StateVec<S> boundary_state_residual(const FluxModel& model, const BoundaryCondition& bc,
                                    double normal, const StateVec<S>& y) {
  StateVec<S> out{};
  if (!model.viscous() || bc.kind == BoundaryKind::outflow) return out;
  const int m = model.components();
  StateVec<S> jump{};
  for (int k = 0; k < m; ++k) jump[k] = normal * (y[k] - bc.state[k]);
  StateVec<S> yb{};
  for (int k = 0; k < m; ++k) yb[k] = S(bc.state[k]);
  return model.constitutive(yb, jump);
}

}  // namespace lsmdg
