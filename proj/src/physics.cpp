#include "lsmdg/physics.hpp"

#include <cmath>
#include <sstream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

AdvectionDiffusionModel::AdvectionDiffusionModel(double velocity, double diffusivity)
    : velocity_(velocity), diffusivity_(diffusivity) {
  if (!(diffusivity >= 0.0) || !std::isfinite(velocity))
    throw ConfigError("advection-diffusion: diffusivity must be non-negative");
}

BurgersModel::BurgersModel(double viscosity) : viscosity_(viscosity) {
  if (!(viscosity > 0.0)) throw ConfigError("burgers: viscosity must be positive");
}

NavierStokes1DModel::NavierStokes1DModel(const NavierStokesParameters& params)
    : params_(params) {
  if (!(params.gamma > 1.0) || !(params.mach > 0.0) || !(params.reynolds > 0.0) ||
      !(params.prandtl > 0.0))
    throw ConfigError("navier-stokes: gamma > 1 and positive Mach, Reynolds, Prandtl required");
  gas_constant_ = 1.0 / params.gamma;
  viscosity_ = params.mach / params.reynolds;  // rho_inf = 1, L = 1, v_inf = M
  conductivity_ = params.gamma * gas_constant_ * viscosity_ / ((params.gamma - 1.0) * params.prandtl);
  sqrt_mu_inf_ = std::sqrt(viscosity_);
}

void NavierStokes1DModel::check_admissible(const Vec& y) const {
  constexpr double floor = 1e-12;
  const double rho = y[0];
  const double p = rho > 0.0 ? pressure(y) : 0.0;
  if (!(rho > floor) || !(p > floor)) {
    std::ostringstream msg;
    msg << "inadmissible state: rho=" << rho << " p=" << p;
    throw AdmissibilityError(msg.str());
  }
}

Vec NavierStokes1DModel::conservative(double rho, double v, double temperature) const {
  const double p = rho * gas_constant_ * temperature;
  return {rho, rho * v, p / (gamma() - 1.0) + 0.5 * rho * v * v};
}

Vec NavierStokes1DModel::primitive(const Vec& y) const {
  return {y[0], y[1] / y[0], temperature(y)};
}

double NavierStokes1DModel::pressure(const Vec& y) const {
  return (gamma() - 1.0) * (y[2] - 0.5 * y[1] * y[1] / y[0]);
}

double NavierStokes1DModel::temperature(const Vec& y) const {
  return pressure(y) / (gas_constant_ * y[0]);
}

double NavierStokes1DModel::stagnation_enthalpy(const Vec& y) const {
  return (y[2] + pressure(y)) / y[0];
}

Vec flux(const FluxModel& model, const Vec& y, const Vec& sigma) {
  model.check_admissible(y);
  const Vec fc = model.convective_flux(y);
  Vec out{};
  if (!model.viscous()) return fc;
  const Vec fv = model.viscous_flux(y, sigma);
  for (int k = 0; k < model.components(); ++k) out[k] = fc[k] - fv[k];
  return out;
}

Vec constitutive_apply(const FluxModel& model, const Vec& y, const Vec& gradient) {
  model.check_admissible(y);
  if (!model.viscous()) return Vec{};
  return model.constitutive(y, gradient);
}

Vec rankine_hugoniot_defect(const FluxModel& model, const Vec& left, const Vec& right) {
  const Vec fl = model.convective_flux(left);
  const Vec fr = model.convective_flux(right);
  Vec out{};
  for (int k = 0; k < model.components(); ++k) out[k] = fl[k] - fr[k];
  return out;
}

namespace {

using scalar::Jet;

// Seeds y in directions 0..m-1 and a second argument in m..2m-1.
void seed(const Vec& a, const Vec& b, int m, StateVec<Jet>& ja, StateVec<Jet>& jb) {
  for (int k = 0; k < m; ++k) {
    ja[k] = Jet::variable(a[k], k);
    jb[k] = Jet::variable(b[k], m + k);
  }
}

void extract(const StateVec<Jet>& f, int m, int offset, Eigen::MatrixXd& out) {
  out.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = f[i].grad[offset + j];
}

}  // namespace

FluxDerivatives derivatives(const FluxModel& model, const Vec& y, const Vec& sigma) {
  model.check_admissible(y);
  const int m = model.components();
  FluxDerivatives d;
  d.model = &model;
  d.y = y;

  StateVec<Jet> jy{}, js{};
  seed(y, sigma, m, jy, js);
  extract(model.convective_flux(jy), m, 0, d.convective_y);
  if (!model.viscous()) {
    d.viscous_y = Eigen::MatrixXd::Zero(m, m);
    d.viscous_sigma = Eigen::MatrixXd::Zero(m, m);
    d.constitutive = Eigen::MatrixXd::Zero(m, m);
    return d;
  }
  const StateVec<Jet> fv = model.viscous_flux(jy, js);
  extract(fv, m, 0, d.viscous_y);
  extract(fv, m, m, d.viscous_sigma);

  // G(y) is linear in the gradient sample, so differentiating at g = 0
  // recovers it exactly.
  StateVec<Jet> jy0{}, jg{};
  seed(y, Vec{}, m, jy0, jg);
  extract(model.constitutive(jy0, jg), m, m, d.constitutive);
  return d;
}

Eigen::MatrixXd FluxDerivatives::constitutive_state_derivative(const Vec& gradient) const {
  const int m = model->components();
  if (!model->viscous()) return Eigen::MatrixXd::Zero(m, m);
  StateVec<Jet> jy{}, jg{};
  seed(y, gradient, m, jy, jg);
  Eigen::MatrixXd out;
  extract(model->constitutive(jy, jg), m, 0, out);
  return out;
}

}  // namespace lsmdg
