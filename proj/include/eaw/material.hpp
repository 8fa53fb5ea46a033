#ifndef EAW_MATERIAL_HPP
#define EAW_MATERIAL_HPP

#include <stdexcept>

namespace eaw {

/// Isotropic material data, constant per subdomain: sigma(u) = 2 mu eps(u) +
/// lambda tr(eps(u)) I in the solid, wave speed c and density rho_a in the
/// fluid, damping rate zeta >= 0.
struct Material {
  double rho_e = 1.0;
  double lambda = 0.0;
  double mu = 1.0;
  double zeta = 0.0;
  double rho_a = 1.0;
  double c = 1.0;

  void validate() const {
    if (!(rho_e > 0.0 && rho_a > 0.0 && mu > 0.0 && c > 0.0) || lambda < 0.0 || zeta < 0.0)
      throw std::invalid_argument("Material: need rho_e, rho_a, mu, c > 0, lambda, zeta >= 0");
  }

  /// Largest eigenvalue of the elasticity tensor (2D isotropic): 2 mu + 2 lambda.
  double cbar() const { return 2.0 * mu + 2.0 * lambda; }

  double cp() const { return std::sqrt((lambda + 2.0 * mu) / rho_e); }
  double cs() const { return std::sqrt(mu / rho_e); }
};

struct StabilizationParams {
  double alpha = 10.0;
  double beta = 10.0;

  void validate() const {
    if (!(alpha > 0.0 && beta > 0.0))
      throw std::invalid_argument("StabilizationParams: alpha and beta must be positive");
  }
};

}  // namespace eaw

#endif
