#pragma once

#include <optional>
#include <string>

#include "vmfem/dual.hpp"
#include "vmfem/errors.hpp"
#include "vmfem/tensor.hpp"

namespace vmfem {

enum class ViscosityModel {
  Sutherland, ///< mu = mu(T), kappa = C_p mu / Pr
  ConstantMu, ///< mu fixed
  ConstantNu, ///< mu = nu * rho
};

std::string to_string(ViscosityModel m);
ViscosityModel viscosity_model_from_string(const std::string& s);

/// Gas constants and transport model. C_p is always C_v + R.
struct FluidProperties {
  double cv = 717.8;
  double gas_constant = 287.0;
  double gamma = 1.4;
  double prandtl = 0.72;
  double c_ref = 1.458e-6;
  double s_ref = 110.4;
  ViscosityModel model = ViscosityModel::Sutherland;
  double mu = 0.0;
  double nu = 0.0;
  /// Fixed conductivity; when absent kappa = C_p mu / Pr.
  std::optional<double> kappa;

  double cp() const { return cv + gas_constant; }
  /// Throws InvalidArgument on non-positive constants or gamma <= 1.
  void validate() const;
  /// |gamma - (1 + R / C_v)|; callers warn when this exceeds 1e-10.
  double gamma_inconsistency() const;
  bool operator==(const FluidProperties&) const = default;
};

/// mu = C_ref T^{3/2} / (T + S_ref)
template <class S>
S sutherland_mu(const S& T, const FluidProperties& props) {
  if (value(T) < 0.0) throw InvalidState("negative temperature in Sutherland's law");
  return props.c_ref * T * sqrt(T) / (T + props.s_ref);
}

/// kappa = C_p mu / Pr
template <class S>
S conductivity(const S& mu, const FluidProperties& props) {
  return (props.cp() / props.prandtl) * mu;
}

/// P = rho R T
template <class S>
S eos_pressure(const S& rho, const S& T, const FluidProperties& props) {
  if (!(value(rho) > 0.0) || !(value(T) > 0.0))
    throw InvalidState("equation of state needs positive density and temperature");
  return props.gas_constant * rho * T;
}

/// Dynamic viscosity of the configured model.
template <class S>
S dynamic_viscosity(const S& rho, const S& T, const FluidProperties& props) {
  switch (props.model) {
  case ViscosityModel::Sutherland:
    return sutherland_mu(T, props);
  case ViscosityModel::ConstantMu:
    return S(props.mu);
  case ViscosityModel::ConstantNu:
    return props.nu * rho;
  }
  return S(0.0);
}

template <class S>
S heat_conductivity(const S& mu, const FluidProperties& props) {
  if (props.kappa) return S(*props.kappa);
  return conductivity(mu, props);
}

/// coef * (grad u + grad u^T - 2/3 (div u) I). With coef = nu this is tau;
/// with coef = mu = rho nu it is rho tau.
template <class S>
Mat2<S> stress_tensor(const S& coef, const Mat2<S>& grad_u) {
  const S two_thirds_div = (2.0 / 3.0) * trace(grad_u);
  Mat2<S> t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t(i, j) = coef * (grad_u(i, j) + grad_u(j, i));
  t(0, 0) = t(0, 0) - coef * two_thirds_div;
  t(1, 1) = t(1, 1) - coef * two_thirds_div;
  return t;
}

/// rho tau : grad u
template <class S>
S viscous_dissipation(const S& rho, const Mat2<S>& tau, const Mat2<S>& grad_u) {
  return rho * contract(tau, grad_u);
}

} // namespace vmfem
