#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nqrent/entanglement.hpp"
#include "nqrent/nqr_model.hpp"

namespace nqrent {

enum class Axis { Alpha, Beta, Eta, Theta, Phi, Temperature };

std::string axis_name(Axis a);
Axis axis_from_name(std::string_view name);  // throws NotFound

struct AxisSpec {
  Axis axis;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

/// Conventions and tolerances stamped onto every result, so emitted files
/// are self-describing.
struct RunMetadata {
  std::string timestamp;                       // filled at run time
  std::array<int, 4> qubit_mapping{0, 1, 2, 3};
  ZeemanSign zeeman_sign = ZeemanSign::Paper;
  std::string eta_sign_convention = "plus";    // eta/2*(I+^2 + I-^2)
  std::string eof_x_convention = "minus";      // x = (1+sqrt(1-C^2))/2
  double hermitian_tol = kHermitianTol;
  std::optional<UnitConvention> unit_convention;
  std::optional<double> ratio;
  std::optional<double> threshold;
  std::optional<double> tol;
};

struct SweepRow {
  std::vector<double> axis_values;  // one per axis, same order as axis_names
  ModelParams params;               // fully resolved coordinates of this row
  double concurrence = 0.0;
  double eof = 0.0;
  double entropy_a = 0.0;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::string> extra_names;  // extra per-row columns (surface op)
  std::vector<std::vector<double>> extra_values;
  std::vector<SweepRow> rows;
  RunMetadata meta;
};

struct SweepSpec {
  AxisSpec axis1;
  std::optional<AxisSpec> axis2;
  ModelParams fixed;                 // defaults for all unswept parameters
  std::optional<double> ratio;       // ratio mode: alpha = ratio * beta
  ZeemanSign zeeman_sign = ZeemanSign::Paper;
  QubitMapping mapping{};
};

/// Grid sweep over one or two axes. Rows are ordered lexicographically by
/// axis indices; grid points may be evaluated concurrently but each row is
/// bit-identical to a fresh thermal_state -> measure_all evaluation.
SweepResult sweep(const SweepSpec& spec);

/// Concurrence/EoF against dimensionless temperature T' = 1/beta at fixed
/// alpha/beta. The beta grid is log-spaced; rows run from hot (small beta)
/// to cold, i.e. T' descending.
SweepResult temperature_scan(double ratio, double eta, const Orientation& o,
                             const GridRange& beta_range,
                             ZeemanSign sign = ZeemanSign::Paper);

struct CriticalPoint {
  double beta_star = 0.0;
  double ratio = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double threshold = 0.0;
};

/// Bisection for the beta at which concurrence first exceeds `threshold`
/// along the line alpha = ratio * beta. Brackets at beta = 1e-3 (separable
/// side) and beta = 50 (entangled side); throws NoTransition when the
/// bracket fails.
CriticalPoint critical_beta(double ratio, double eta, const Orientation& o,
                            double threshold = 1e-6, double tol = 1e-3,
                            ZeemanSign sign = ZeemanSign::Paper);

struct AngleOptimum {
  double theta_star = 0.0;
  double phi_star = 0.0;
  double c_star = 0.0;
};

/// Maximize concurrence over orientation at fixed (alpha, beta, eta):
/// coarse grid (theta in [0, pi], phi in [0, 2pi)), then golden-section
/// refinement per axis. Exactly degenerate maxima (phi = 0 vs pi, theta vs
/// pi - theta, any phi when eta = 0) resolve toward smaller angles.
AngleOptimum maximize_over_angles(double alpha, double beta, double eta,
                                  int grid_n = 181, int refine_iters = 40,
                                  ZeemanSign sign = ZeemanSign::Paper);

/// The angle-maximized concurrence surface over an (alpha, beta) grid.
/// Each cell is an independent maximize_over_angles call; theta_star and
/// phi_star are recorded as extra columns.
SweepResult max_over_angles_surface(const GridRange& alpha_range,
                                    const GridRange& beta_range, double eta,
                                    int grid_n = 61, int refine_iters = 24,
                                    ZeemanSign sign = ZeemanSign::Paper);

}  // namespace nqrent
