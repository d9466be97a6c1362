#include "vmfem/physics.hpp"

#include <cmath>

namespace vmfem {

std::string to_string(ViscosityModel m) {
  switch (m) {
  case ViscosityModel::Sutherland:
    return "sutherland";
  case ViscosityModel::ConstantMu:
    return "constant-mu";
  case ViscosityModel::ConstantNu:
    return "constant-nu";
  }
  return "unknown";
}

ViscosityModel viscosity_model_from_string(const std::string& s) {
  if (s == "sutherland") return ViscosityModel::Sutherland;
  if (s == "constant-mu") return ViscosityModel::ConstantMu;
  if (s == "constant-nu") return ViscosityModel::ConstantNu;
  throw InvalidArgument("unknown viscosity model '" + s + "'");
}

void FluidProperties::validate() const {
  if (!(cv > 0.0) || !(gas_constant > 0.0) || !(prandtl > 0.0))
    throw InvalidArgument("C_v, R and Pr must be positive");
  if (!(gamma > 1.0)) throw InvalidArgument("gamma must exceed 1");
  switch (model) {
  case ViscosityModel::Sutherland:
    if (!(c_ref > 0.0) || !(s_ref > 0.0)) throw InvalidArgument("Sutherland constants must be positive");
    break;
  case ViscosityModel::ConstantMu:
    if (!(mu >= 0.0)) throw InvalidArgument("mu must be non-negative");
    break;
  case ViscosityModel::ConstantNu:
    if (!(nu >= 0.0)) throw InvalidArgument("nu must be non-negative");
    break;
  }
  if (kappa && !(*kappa >= 0.0)) throw InvalidArgument("kappa must be non-negative");
}

double FluidProperties::gamma_inconsistency() const {
  return std::abs(gamma - (1.0 + gas_constant / cv));
}

} // namespace vmfem
