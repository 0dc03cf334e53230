#include "nqrent/nqr_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>

namespace nqrent {

namespace {

// 2019 SI exact values.
constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K
constexpr double kExpArgLimit = 700.0;         // double-precision exp range guard

double quadrupole_denominator(const SpinSystem& spin) {
  const double I = spin.spin();
  return 4.0 * I * (2.0 * I - 1.0);
}

}  // namespace

Orientation::Orientation(double theta_, double phi_) : theta(theta_), phi(phi_) {
  if (!(theta >= 0.0 && theta <= M_PI))
    throw OutOfRange("Orientation: theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * M_PI))
    throw OutOfRange("Orientation: phi must lie in [0, 2*pi)");
}

ModelParams::ModelParams(double alpha_, double beta_, double eta_, Orientation o)
    : alpha(alpha_), beta(beta_), eta(eta_), orientation(o) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw OutOfRange("ModelParams: alpha and beta must be finite");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw EtaOutOfRange("ModelParams: eta must lie in [0, 1]");
}

namespace {

// exp(-i A) for Hermitian A: V diag(exp(-i w)) V^dagger.
ComplexMatrix unitary_exp(const ComplexMatrix& a) {
  const HermitianEig eig = hermitian_eig(a);
  const int d = static_cast<int>(a.rows());
  ComplexMatrix expw = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    expw(k, k) = std::exp(Complex(0, -eig.eigenvalues(k)));
  return eig.eigenvectors * expw * eig.eigenvectors.adjoint();
}

}  // namespace

ComplexMatrix rotation_operator(const SpinSystem& spin, const Orientation& o) {
  const SpinOperators ops = spin_operators(spin);
  // exp(-i phi Iz) is diagonal; build it directly.
  const int d = spin.dim();
  ComplexMatrix phase = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    phase(k, k) = std::exp(Complex(0, -o.phi * ops.iz(k, k).real()));
  return phase * unitary_exp(o.theta * ops.iy) * phase.adjoint();
}

ComplexMatrix quadrupole_hamiltonian(const SpinSystem& spin, double eta,
                                     const Orientation& o) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw EtaOutOfRange("quadrupole_hamiltonian: eta must lie in [0, 1]");
  const SpinOperators ops = spin_operators(spin);
  const ComplexMatrix base =
      3.0 * ops.iz * ops.iz - ops.i_squared +
      0.5 * eta * (ops.i_plus * ops.i_plus + ops.i_minus * ops.i_minus);
  const ComplexMatrix u = rotation_operator(spin, o);
  return u * base * u.adjoint();
}

ComplexMatrix zeeman_hamiltonian(const SpinSystem& spin) {
  return -spin_operators(spin).iz;
}

ComplexMatrix thermal_state(const SpinSystem& spin, const ModelParams& p,
                            ZeemanSign sign) {
  const SpinOperators ops = spin_operators(spin);
  const ComplexMatrix hq =
      quadrupole_hamiltonian(spin, p.eta, p.orientation);

  const double hq_norm = hq.operatorNorm();
  if (std::abs(p.alpha) + std::abs(p.beta) * hq_norm > kExpArgLimit)
    throw Overflow("thermal_state: |alpha| + |beta|*||Hq|| exceeds exp range");

  const double zeeman = (sign == ZeemanSign::Paper) ? -p.alpha : p.alpha;
  const ComplexMatrix exponent = zeeman * ops.iz - p.beta * hq;

  const HermitianEig eig = hermitian_eig(exponent);
  const double shift = eig.eigenvalues.maxCoeff();
  RealVector weights = (eig.eigenvalues.array() - shift).exp();
  weights /= weights.sum();
  ComplexMatrix rho =
      eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.adjoint();
  // symmetrize away the last-bit asymmetry from the triple product
  rho = 0.5 * (rho + rho.adjoint());
  return rho;
}

ModelParams physical_to_dimensionless(const SpinSystem& spin,
                                      const MaterialPreset& material,
                                      double gamma_mhz_per_tesla,
                                      double field_tesla, double temp_kelvin,
                                      UnitConvention conv,
                                      const Orientation& o) {
  if (!(temp_kelvin > 0.0))
    throw NonpositiveTemperature("physical_to_dimensionless: temperature must be > 0");
  const double kt = kBoltzmann * temp_kelvin;
  const double alpha =
      kPlanck * gamma_mhz_per_tesla * 1e6 * field_tesla / kt;
  double nu_eff = material.eqq_zz_mhz * 1e6;
  if (conv == UnitConvention::Reduced) nu_eff /= quadrupole_denominator(spin);
  const double beta = kPlanck * nu_eff / kt;
  return ModelParams(alpha, beta, material.eta, o);
}

double temperature_for_beta(const SpinSystem& spin,
                            const MaterialPreset& material, double beta,
                            UnitConvention conv) {
  if (beta == 0.0) throw OutOfRange("temperature_for_beta: beta must be nonzero");
  double nu_eff = material.eqq_zz_mhz * 1e6;
  if (conv == UnitConvention::Reduced) nu_eff /= quadrupole_denominator(spin);
  return kPlanck * nu_eff / (kBoltzmann * beta);
}

const std::vector<MaterialPreset>& builtin_presets() {
  // YBa2Cu3O7-d copper sites; Cu-65 entries reuse the site EFG, so eQq scales
  // by the quadrupole-moment ratio 0.195/0.211.
  static const std::vector<MaterialPreset> table = {
      {"cu63-4coord", -0.211e-24, 38.2, 0.92,
       "63Cu, four-coordinated copper site (planar), YBa2Cu3O7-d"},
      {"cu63-5coord", -0.211e-24, 62.8, 0.14,
       "63Cu, five-coordinated copper site (pyramidal), YBa2Cu3O7-d"},
      {"cu65-4coord", -0.195e-24, 38.2 * (0.195 / 0.211), 0.92,
       "65Cu, four-coordinated copper site; eQq scaled from 63Cu by Q ratio"},
      {"cu65-5coord", -0.195e-24, 62.8 * (0.195 / 0.211), 0.14,
       "65Cu, five-coordinated copper site; eQq scaled from 63Cu by Q ratio"},
  };
  return table;
}

const MaterialPreset& find_preset(std::string_view label,
                                  const std::vector<MaterialPreset>& table) {
  for (const auto& p : table)
    if (p.label == label) return p;
  throw NotFound("preset not found: " + std::string(label));
}

std::vector<MaterialPreset> load_presets_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFound("cannot open preset file: " + file.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.is_array()) throw Error("preset file must contain a JSON array");

  std::vector<MaterialPreset> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    MaterialPreset p;
    p.label = item.at("label").get<std::string>();
    p.eqq_zz_mhz = item.at("eqq_zz_mhz").get<double>();
    p.eta = item.at("eta").get<double>();
    p.quadrupole_moment_cm2 = item.value("quadrupole_moment_cm2", 0.0);
    p.site = item.value("site", std::string{});
    if (!(p.eqq_zz_mhz > 0.0))
      throw Error("preset '" + p.label + "': eqq_zz_mhz must be > 0");
    if (!(p.eta >= 0.0 && p.eta <= 1.0))
      throw EtaOutOfRange("preset '" + p.label + "': eta outside [0, 1]");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<MaterialPreset> preset_table() {
  std::vector<MaterialPreset> merged;
  const char* env = std::getenv("NQR_PRESETS");
  if (env && *env) merged = load_presets_json(env);
  for (const auto& b : builtin_presets()) {
    bool shadowed = false;
    for (const auto& m : merged)
      if (m.label == b.label) { shadowed = true; break; }
    if (!shadowed) merged.push_back(b);
  }
  return merged;
}

}  // namespace nqrent
