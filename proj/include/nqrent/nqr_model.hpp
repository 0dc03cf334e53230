#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nqrent/spin_algebra.hpp"

namespace nqrent {

/// Orientation of the lab-frame z axis (the field direction) in the EFG
/// principal axes frame. Range-checked: theta in [0, pi], phi in [0, 2*pi).
struct Orientation {
  double theta = 0.0;
  double phi = 0.0;

  Orientation() = default;
  Orientation(double theta_, double phi_);
};

/// Which sign the Zeeman term carries inside the thermal exponent.
/// Paper: exp(-alpha*Iz - beta*Hq). Physical: exp(+alpha*Iz - beta*Hq),
/// what substituting H_M = -gamma*H0*Iz into the Gibbs weight gives.
/// Concurrence is identical under both; the flag keeps the choice visible.
enum class ZeemanSign { Paper, Physical };

/// How a quadrupole coupling in frequency units maps onto beta.
/// Reduced: beta = h * (eQq_ZZ / 4I(2I-1)) / kB T  (the definition next to
/// the dimensionless density matrix). Full: beta = h * eQq_ZZ / kB T (the
/// convention that reproduces the quoted ~5 mK estimate).
enum class UnitConvention { Reduced, Full };

/// Dimensionless model parameters: alpha = gamma*H0/kBT (Zeeman),
/// beta = quadrupole coupling / kBT, EFG asymmetry eta, field orientation.
struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  Orientation orientation{};

  ModelParams() = default;
  ModelParams(double alpha_, double beta_, double eta_, Orientation o);
};

struct MaterialPreset {
  std::string label;
  double quadrupole_moment_cm2 = 0.0;  // informational
  double eqq_zz_mhz = 0.0;
  double eta = 0.0;
  std::string site;
};

/// U(theta, phi) = exp(-i phi Iz) exp(-i theta Iy) exp(i phi Iz).
ComplexMatrix rotation_operator(const SpinSystem& spin, const Orientation& o);

/// Dimensionless quadrupole operator shape
///   U [ 3 Iz^2 - I^2 + (eta/2)(I+^2 + I-^2) ] U^dagger.
/// The eQq_ZZ/4I(2I-1) prefactor is *not* included; it lives in beta.
ComplexMatrix quadrupole_hamiltonian(const SpinSystem& spin, double eta,
                                     const Orientation& o);

/// -Iz: the Zeeman Hamiltonian in units of gamma*H0.
ComplexMatrix zeeman_hamiltonian(const SpinSystem& spin);

/// Thermal density matrix exp(-alpha Iz - beta Hq)/Z (paper sign) for the
/// given dimensionless parameters. Hermitian, unit trace, PSD by
/// construction. Throws Overflow when |alpha| + |beta|*||Hq|| > 700.
ComplexMatrix thermal_state(const SpinSystem& spin, const ModelParams& p,
                            ZeemanSign sign = ZeemanSign::Paper);

/// Physical (SI) to dimensionless conversion.
/// alpha = h * gamma[Hz/T] * H0[T] / (kB T); beta = h * nu_eff / (kB T) with
/// nu_eff = eQq_ZZ or eQq_ZZ / 4I(2I-1) depending on the convention.
/// gamma is accepted in MHz/T to sidestep rad/s ambiguity.
ModelParams physical_to_dimensionless(const SpinSystem& spin,
                                      const MaterialPreset& material,
                                      double gamma_mhz_per_tesla,
                                      double field_tesla, double temp_kelvin,
                                      UnitConvention conv,
                                      const Orientation& o = {});

/// Inverse of the beta conversion: the temperature (K) at which the material
/// reaches the given dimensionless beta.
double temperature_for_beta(const SpinSystem& spin,
                            const MaterialPreset& material, double beta,
                            UnitConvention conv);

/// The field (T) -> alpha conversion and its inverse live in
/// physical_to_dimensionless; beta-only helpers are enough for the CLI.

const std::vector<MaterialPreset>& builtin_presets();

/// Lookup by label. Throws NotFound.
const MaterialPreset& find_preset(std::string_view label,
                                  const std::vector<MaterialPreset>& table);

/// Load additional presets from a JSON file: an array of objects with keys
/// label, eqq_zz_mhz, eta, quadrupole_moment_cm2, site.
std::vector<MaterialPreset> load_presets_json(const std::filesystem::path& file);

/// Builtin presets merged with the file named by the NQR_PRESETS environment
/// variable (if set); file entries shadow builtins with the same label.
std::vector<MaterialPreset> preset_table();

}  // namespace nqrent
