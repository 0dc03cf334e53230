#include "nqrent/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "nqrent/emit.hpp"
#include "nqrent/scan.hpp"

namespace nqrent::cli {

namespace {

using nlohmann::json;

// Flag combinations the parser alone cannot reject; reported at exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const SpinSystem kSpin32{3};

struct CommonFlags {
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool degrees = false;
  std::string zeeman_sign = "paper";
  std::string format = "json";
  std::string output;  // empty = stdout
  std::vector<int> mapping{0, 1, 2, 3};
};

void add_param_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--alpha", f.alpha, "Zeeman parameter gamma*H0/kB*T (dimensionless)");
  cmd->add_option("--beta", f.beta, "quadrupole parameter (dimensionless)");
  cmd->add_option("--eta", f.eta, "EFG asymmetry, 0..1 (dimensionless)");
  cmd->add_option("--theta", f.theta, "polar angle of the field in the PAF (radians; degrees with --degrees)");
  cmd->add_option("--phi", f.phi, "azimuthal angle of the field in the PAF (radians; degrees with --degrees)");
  cmd->add_flag("--degrees", f.degrees, "interpret --theta/--phi in degrees");
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--format", f.format, "output format: csv or json (default json)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", f.output, "output file path (default: standard output)");
  cmd->add_option("--zeeman-sign", f.zeeman_sign,
                  "thermal exponent sign convention: paper (-alpha*Iz) or physical (+alpha*Iz)")
      ->check(CLI::IsMember({"paper", "physical"}));
  cmd->add_option("--mapping", f.mapping,
                  "spin level -> qubit basis permutation, 4 indices (default 0 1 2 3)")
      ->expected(4);
}

// Range checks shared by every command, run before any computation.
void validate_physics(CommonFlags& f) {
  if (f.degrees) {
    f.theta *= M_PI / 180.0;
    f.phi *= M_PI / 180.0;
    f.degrees = false;
  }
  if (!(f.eta >= 0.0 && f.eta <= 1.0))
    throw UsageError("--eta must lie in [0, 1]");
  if (!(f.theta >= 0.0 && f.theta <= M_PI))
    throw UsageError("--theta must lie in [0, pi] radians");
  if (!(f.phi >= 0.0 && f.phi < 2.0 * M_PI))
    throw UsageError("--phi must lie in [0, 2*pi) radians");
  if (!std::isfinite(f.alpha) || !std::isfinite(f.beta))
    throw UsageError("--alpha/--beta must be finite");
}

QubitMapping mapping_of(const CommonFlags& f) {
  std::array<int, 4> perm{};
  std::copy_n(f.mapping.begin(), 4, perm.begin());
  try {
    return QubitMapping(perm);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

ModelParams params_of(const CommonFlags& f) {
  return ModelParams(f.alpha, f.beta, f.eta, Orientation(f.theta, f.phi));
}

RunMetadata metadata_of(const CommonFlags& f) {
  RunMetadata m;
  m.qubit_mapping = mapping_of(f).permutation;
  m.zeeman_sign = zeeman_sign_from_string(f.zeeman_sign);
  return m;
}

AxisSpec parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string axis, smin, smax, scount;
  if (!std::getline(in, axis, ':') || !std::getline(in, smin, ':') ||
      !std::getline(in, smax, ':') || !std::getline(in, scount))
    throw UsageError("--grid expects axis:min:max:count, got '" + text + "'");
  AxisSpec spec;
  try {
    spec.axis = axis_from_name(axis);
    spec.min = std::stod(smin);
    spec.max = std::stod(smax);
    spec.count = std::stoi(scount);
  } catch (const std::exception&) {
    throw UsageError("--grid could not parse '" + text + "'");
  }
  if (spec.count < 2) throw UsageError("--grid count must be >= 2");
  if (!(spec.min < spec.max)) throw UsageError("--grid needs min < max");
  switch (spec.axis) {
    case Axis::Eta:
      if (spec.min < 0.0 || spec.max > 1.0)
        throw UsageError("--grid eta range must stay in [0, 1]");
      break;
    case Axis::Theta:
      if (spec.min < 0.0 || spec.max > M_PI)
        throw UsageError("--grid theta range must stay in [0, pi]");
      break;
    case Axis::Phi:
      if (spec.min < 0.0 || spec.max >= 2.0 * M_PI)
        throw UsageError("--grid phi range must stay in [0, 2*pi)");
      break;
    case Axis::Temperature:
      if (!(spec.min > 0.0))
        throw UsageError("--grid temperature range must be positive");
      break;
    default:
      break;
  }
  return spec;
}

void write_json(const json& doc, const CommonFlags& f) {
  if (f.output.empty() || f.output == "-")
    emit_json(doc, std::cout);
  else
    emit_json(doc, std::filesystem::path(f.output));
}

void write_sweep(const SweepResult& result, const CommonFlags& f) {
  if (f.format == "csv") {
    if (f.output.empty() || f.output == "-")
      emit_csv(result, std::cout);
    else
      emit_csv(result, std::filesystem::path(f.output));
  } else {
    write_json(to_json(result), f);
  }
}

// A single-row CSV view for scalar results (measure/critical/optimize).
void write_scalar_csv(const std::vector<std::pair<std::string, double>>& cols,
                      const RunMetadata& meta, const CommonFlags& f) {
  std::ostringstream out;
  out << "# nqrent\n# timestamp: " << meta.timestamp << '\n';
  for (size_t i = 0; i < cols.size(); ++i)
    out << cols[i].first << (i + 1 < cols.size() ? ',' : '\n');
  for (size_t i = 0; i < cols.size(); ++i)
    out << format_double(cols[i].second) << (i + 1 < cols.size() ? ',' : '\n');
  if (f.output.empty() || f.output == "-") {
    std::cout << out.str();
  } else {
    std::ofstream file(f.output);
    if (!file) throw Error("cannot open " + f.output);
    file << out.str();
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int dispatch(const std::vector<std::string>& args);

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"thermal entanglement of a quadrupolar spin-3/2 nucleus in an "
               "EFG and external magnetic field"};
  app.require_subcommand(1);

  CommonFlags f;

  // --- state ---------------------------------------------------------------
  auto* state = app.add_subcommand("state", "print the thermal density matrix");
  add_param_flags(state, f);
  add_output_flags(state, f);

  // --- measure -------------------------------------------------------------
  auto* measure = app.add_subcommand(
      "measure", "concurrence, EoF and subsystem entropies at one point");
  add_param_flags(measure, f);
  add_output_flags(measure, f);

  // --- sweep ---------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over 1 or 2 axes");
  std::vector<std::string> grid_flags;
  std::optional<double> ratio_flag;
  double ratio_value = 0.0;
  add_param_flags(sweep_cmd, f);
  add_output_flags(sweep_cmd, f);
  sweep_cmd->add_option("--grid", grid_flags,
                        "axis:min:max:count with axis in {alpha,beta,eta,theta,phi,T}; repeatable, max twice")
      ->expected(1, 2);
  auto* sweep_ratio = sweep_cmd->add_option(
      "--ratio", ratio_value, "fix alpha = ratio * beta (dimensionless)");

  // --- scan-temp -----------------------------------------------------------
  auto* scan_cmd = app.add_subcommand(
      "scan-temp", "concurrence vs dimensionless temperature T' = 1/beta at fixed alpha/beta");
  double scan_ratio = 1.0;
  std::string scan_grid = "beta:0.05:60:120";
  add_param_flags(scan_cmd, f);
  add_output_flags(scan_cmd, f);
  scan_cmd->add_option("--ratio", scan_ratio, "alpha/beta ratio (dimensionless)")->required();
  scan_cmd->add_option("--grid", scan_grid,
                       "beta:min:max:count, log-spaced beta grid (default beta:0.05:60:120)");

  // --- critical ------------------------------------------------------------
  auto* critical_cmd = app.add_subcommand(
      "critical", "bisect for the beta where concurrence first exceeds the threshold");
  double crit_ratio = 1.0, crit_threshold = 1e-6, crit_tol = 1e-3;
  add_param_flags(critical_cmd, f);
  add_output_flags(critical_cmd, f);
  critical_cmd->add_option("--ratio", crit_ratio, "alpha/beta ratio (dimensionless)")->required();
  critical_cmd->add_option("--threshold", crit_threshold,
                           "concurrence onset threshold (dimensionless, default 1e-6)");
  critical_cmd->add_option("--tol", crit_tol,
                           "bisection bracket width in beta (dimensionless, default 1e-3)");

  // --- optimize ------------------------------------------------------------
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "maximize concurrence over the field orientation (theta, phi)");
  int grid_n = 181, refine_iters = 40;
  add_param_flags(optimize_cmd, f);
  add_output_flags(optimize_cmd, f);
  optimize_cmd->add_option("--grid-n", grid_n, "coarse angular grid points per axis (default 181)");
  optimize_cmd->add_option("--refine-iters", refine_iters,
                           "golden-section refinement steps per axis (default 40)");

  // --- convert -------------------------------------------------------------
  auto* convert_cmd = app.add_subcommand(
      "convert", "physical units <-> dimensionless (alpha, beta)");
  std::string material_label;
  double gamma_mhz_per_t = 0.0, field_t = 0.0, temp_k = 0.0, eqq_mhz = 0.0;
  std::string unit_convention = "reduced";
  add_param_flags(convert_cmd, f);
  add_output_flags(convert_cmd, f);
  convert_cmd->add_option("--material", material_label, "preset label, see `presets`");
  convert_cmd->add_option("--eqq-mhz", eqq_mhz, "quadrupole coupling eQq_ZZ (MHz), instead of --material");
  convert_cmd->add_option("--gamma-mhz-per-t", gamma_mhz_per_t, "gyromagnetic ratio (MHz/T)");
  convert_cmd->add_option("--field-t", field_t, "magnetic field strength (tesla)");
  auto* temp_opt = convert_cmd->add_option(
      "--temp-k", temp_k, "temperature (kelvin); forward conversion to (alpha, beta)");
  convert_cmd->add_option("--unit-convention", unit_convention,
                          "beta convention: reduced (eQq/4I(2I-1)) or full (eQq)")
      ->check(CLI::IsMember({"reduced", "full"}));
  // with --beta and no --temp-k, convert runs inverse: beta -> kelvin

  // --- presets ---------------------------------------------------------------
  auto* presets_cmd = app.add_subcommand(
      "presets", "list material presets (builtin plus NQR_PRESETS file)");
  add_output_flags(presets_cmd, f);

  // ---------------------------------------------------------------------------
  std::vector<const char*> argv;
  argv.push_back("nqrent");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  validate_physics(f);
  const ZeemanSign sign = zeeman_sign_from_string(f.zeeman_sign);
  const QubitMapping mapping = mapping_of(f);

  if (*state) {
    RunMetadata meta = metadata_of(f);
    meta.timestamp = utc_now();
    const ComplexMatrix rho = thermal_state(kSpin32, params_of(f), sign);
    if (f.format == "csv") {
      std::ostringstream out;
      out << "# nqrent state\n# timestamp: " << meta.timestamp << '\n'
          << "i,j,re,im\n";
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          out << i << ',' << j << ',' << format_double(rho(i, j).real()) << ','
              << format_double(rho(i, j).imag()) << '\n';
      if (f.output.empty() || f.output == "-") {
        std::cout << out.str();
      } else {
        std::ofstream file(f.output);
        if (!file) throw Error("cannot open " + f.output);
        file << out.str();
      }
    } else {
      write_json(state_to_json(rho, meta), f);
    }
    return 0;
  }

  if (*measure) {
    RunMetadata meta = metadata_of(f);
    meta.timestamp = utc_now();
    const EntanglementReport rep =
        measure_all(thermal_state(kSpin32, params_of(f), sign), mapping);
    if (f.format == "csv") {
      write_scalar_csv({{"concurrence", rep.concurrence},
                        {"eof", rep.eof},
                        {"entropy_a", rep.entropy_a},
                        {"entropy_b", rep.entropy_b},
                        {"nu1", rep.nu[0]},
                        {"nu2", rep.nu[1]},
                        {"nu3", rep.nu[2]},
                        {"nu4", rep.nu[3]}},
                       meta, f);
    } else {
      write_json(to_json(rep, meta), f);
    }
    return 0;
  }

  if (*sweep_cmd) {
    if (grid_flags.empty()) throw UsageError("sweep requires at least one --grid");
    SweepSpec spec;
    spec.axis1 = parse_grid(grid_flags[0]);
    if (grid_flags.size() > 1) spec.axis2 = parse_grid(grid_flags[1]);
    if (spec.axis2 && spec.axis2->axis == spec.axis1.axis)
      throw UsageError("--grid axes must differ");
    if (spec.axis1.axis == Axis::Temperature && !(spec.axis1.min > 0.0))
      throw UsageError("temperature grid must be positive");
    spec.fixed = params_of(f);
    if (!sweep_ratio->empty()) {
      if (!(ratio_value > 0.0)) throw UsageError("--ratio must be > 0");
      const auto is_alpha = [](const AxisSpec& a) { return a.axis == Axis::Alpha; };
      if (is_alpha(spec.axis1) || (spec.axis2 && is_alpha(*spec.axis2)))
        throw UsageError("--ratio fixes alpha = ratio*beta; alpha cannot be a --grid axis");
      spec.ratio = ratio_value;
    }
    spec.zeeman_sign = sign;
    spec.mapping = mapping;
    write_sweep(sweep(spec), f);
    return 0;
  }

  if (*scan_cmd) {
    if (!(scan_ratio > 0.0)) throw UsageError("--ratio must be > 0");
    const AxisSpec g = parse_grid(scan_grid);
    if (g.axis != Axis::Beta) throw UsageError("scan-temp --grid axis must be beta");
    if (!(g.min > 0.0)) throw UsageError("scan-temp beta range must be positive");
    write_sweep(temperature_scan(scan_ratio, f.eta, Orientation(f.theta, f.phi),
                                 GridRange{g.min, g.max, g.count}, sign),
                f);
    return 0;
  }

  if (*critical_cmd) {
    if (!(crit_ratio > 0.0)) throw UsageError("--ratio must be > 0");
    if (!(crit_tol > 0.0)) throw UsageError("--tol must be > 0");
    RunMetadata meta = metadata_of(f);
    meta.timestamp = utc_now();
    meta.ratio = crit_ratio;
    meta.threshold = crit_threshold;
    meta.tol = crit_tol;
    const CriticalPoint cp = critical_beta(crit_ratio, f.eta,
                                           Orientation(f.theta, f.phi),
                                           crit_threshold, crit_tol, sign);
    if (f.format == "csv") {
      write_scalar_csv({{"beta_star", cp.beta_star},
                        {"ratio", cp.ratio},
                        {"bracket_lo", cp.bracket.first},
                        {"bracket_hi", cp.bracket.second},
                        {"threshold", cp.threshold}},
                       meta, f);
    } else {
      write_json(to_json(cp, meta), f);
    }
    return 0;
  }

  if (*optimize_cmd) {
    if (grid_n < 3) throw UsageError("--grid-n must be >= 3");
    if (refine_iters < 0) throw UsageError("--refine-iters must be >= 0");
    RunMetadata meta = metadata_of(f);
    meta.timestamp = utc_now();
    const AngleOptimum opt =
        maximize_over_angles(f.alpha, f.beta, f.eta, grid_n, refine_iters, sign);
    if (f.format == "csv") {
      write_scalar_csv({{"theta_star", opt.theta_star},
                        {"phi_star", opt.phi_star},
                        {"c_star", opt.c_star}},
                       meta, f);
    } else {
      write_json(to_json(opt, meta), f);
    }
    return 0;
  }

  if (*convert_cmd) {
    const UnitConvention conv = unit_convention_from_string(unit_convention);
    MaterialPreset material;
    if (!material_label.empty()) {
      try {
        material = find_preset(material_label, preset_table());
      } catch (const NotFound& e) {
        throw UsageError(e.what());
      }
    } else if (eqq_mhz > 0.0) {
      material = MaterialPreset{"custom", 0.0, eqq_mhz, f.eta, "ad hoc"};
    } else {
      throw UsageError("convert requires --material or --eqq-mhz");
    }
    RunMetadata meta = metadata_of(f);
    meta.timestamp = utc_now();
    meta.unit_convention = conv;

    const bool has_beta = !convert_cmd->get_option("--beta")->empty();
    if (temp_opt->empty() && has_beta) {
      if (f.beta == 0.0) throw UsageError("--beta must be nonzero for the inverse conversion");
      const double kelvin = temperature_for_beta(kSpin32, material, f.beta, conv);
      json doc{{"temp_k", kelvin},
               {"beta", f.beta},
               {"material", material.label},
               {"eqq_zz_mhz", material.eqq_zz_mhz},
               {"meta", meta_to_json(meta)}};
      write_json(doc, f);
      return 0;
    }
    if (temp_opt->empty()) throw UsageError("convert requires --temp-k or --beta");
    if (!(temp_k > 0.0)) throw UsageError("--temp-k must be > 0");
    const ModelParams p = physical_to_dimensionless(
        kSpin32, material, gamma_mhz_per_t, field_t, temp_k, conv,
        Orientation(f.theta, f.phi));
    json doc = to_json(p, meta);
    doc["material"] = material.label;
    doc["temp_k"] = temp_k;
    doc["field_t"] = field_t;
    write_json(doc, f);
    return 0;
  }

  if (*presets_cmd) {
    const auto table = preset_table();
    if (f.format == "csv") {
      std::ostringstream out;
      out << "label,eqq_zz_mhz,eta,quadrupole_moment_cm2,site\n";
      for (const auto& p : table)
        out << p.label << ',' << format_double(p.eqq_zz_mhz) << ','
            << format_double(p.eta) << ',' << format_double(p.quadrupole_moment_cm2)
            << ',' << '"' << p.site << '"' << '\n';
      if (f.output.empty() || f.output == "-") {
        std::cout << out.str();
      } else {
        std::ofstream file(f.output);
        if (!file) throw Error("cannot open " + f.output);
        file << out.str();
      }
    } else {
      json doc = json::array();
      for (const auto& p : table) doc.push_back(to_json(p));
      write_json(doc, f);
    }
    return 0;
  }

  throw UsageError("no subcommand given; run with --help");
}

}  // namespace

}  // namespace nqrent::cli
