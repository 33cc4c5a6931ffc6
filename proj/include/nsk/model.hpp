#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk {

/// Power with an exact path for integral exponents.
///
/// Integral exponents (|e| <= 64) are evaluated by repeated squaring so that
/// test values such as 0.5^-3 come out bit-exact; everything else goes
/// through std::pow.
inline double power(double base, double exponent) {
  const double rounded = std::nearbyint(exponent);
  if (rounded == exponent && std::fabs(exponent) <= 64.0) {
    auto k = static_cast<long>(std::fabs(rounded));
    double result = 1.0;
    double b = base;
    while (k > 0) {
      if (k & 1L) result *= b;
      b *= b;
      k >>= 1;
    }
    return exponent < 0.0 ? 1.0 / result : result;
  }
  return std::pow(base, exponent);
}

/// Constitutive family: constant shear viscosity with density-dependent
/// bulk viscosity, or both viscosities proportional to rho^alpha.
enum class ModelKind { Kazhikhov, DensityDependent };

inline const char* to_string(ModelKind kind) {
  return kind == ModelKind::Kazhikhov ? "kazhikhov" : "density-dependent";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "kazhikhov" || s == "Kazhikhov") return ModelKind::Kazhikhov;
  if (s == "density-dependent" || s == "density_dependent" || s == "DensityDependent")
    return ModelKind::DensityDependent;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

/// Parameters of the power-law constitutive model in specific-volume form.
/// The capillarity prefactor is normalised to one.
struct ModelParams {
  ModelKind kind = ModelKind::Kazhikhov;
  double alpha = 0.0;         ///< viscosity exponent
  double beta = -2.5;         ///< capillarity exponent
  double gamma = 1.4;         ///< adiabatic exponent, >= 1
  double mu_tilde = 1.0;      ///< shear viscosity prefactor, > 0
  double lambda_tilde = 0.0;  ///< bulk viscosity prefactor
  int dim = 3;                ///< spatial dimension d; d = 1 gives the planar reduction m = 0
  double a = 1.0;             ///< inner boundary radius, > 0

  /// Geometric factor m = d - 1.
  [[nodiscard]] int m() const { return dim - 1; }
};

namespace detail {
inline void require_positive_volume(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::domain_error(std::string(what) + ": specific volume must be positive, got " +
                            std::to_string(v));
  }
}
}  // namespace detail

/// p(v) = v^-gamma.
inline double pressure(double v, const ModelParams& params) {
  detail::require_positive_volume(v, "pressure");
  return power(v, -params.gamma);
}

inline double shear_viscosity(double v, const ModelParams& params) {
  detail::require_positive_volume(v, "shear_viscosity");
  if (params.kind == ModelKind::Kazhikhov) return params.mu_tilde;
  return params.mu_tilde * power(v, -params.alpha);
}

inline double bulk_viscosity(double v, const ModelParams& params) {
  detail::require_positive_volume(v, "bulk_viscosity");
  return params.lambda_tilde * power(v, -params.alpha);
}

/// kappa(v) = v^-beta.
inline double capillarity(double v, const ModelParams& params) {
  detail::require_positive_volume(v, "capillarity");
  return power(v, -params.beta);
}

/// Physical admissibility of the coefficient set. Violations are returned
/// as human-readable strings; an empty list means the set is admissible.
inline std::vector<std::string> validate(const ModelParams& params) {
  std::vector<std::string> violations;
  if (!std::isfinite(params.alpha) || !std::isfinite(params.beta) ||
      !std::isfinite(params.gamma) || !std::isfinite(params.mu_tilde) ||
      !std::isfinite(params.lambda_tilde) || !std::isfinite(params.a))
    violations.emplace_back("non-finite parameter");
  if (!(params.mu_tilde > 0.0)) violations.emplace_back("mu_tilde <= 0");
  if (!(2.0 * params.mu_tilde + params.dim * params.lambda_tilde > 0.0))
    violations.emplace_back("2*mu_tilde + dim*lambda_tilde <= 0");
  if (!(params.gamma >= 1.0)) violations.emplace_back("gamma < 1");
  if (params.dim < 1) violations.emplace_back("dim < 1");
  if (!(params.a > 0.0)) violations.emplace_back("a <= 0");
  return violations;
}

}  // namespace nsk
