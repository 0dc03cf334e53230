#include "nqrent/emit.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace nqrent {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_string(ZeemanSign s) {
  return s == ZeemanSign::Paper ? "paper" : "physical";
}

std::string to_string(UnitConvention c) {
  return c == UnitConvention::Full ? "full" : "reduced";
}

ZeemanSign zeeman_sign_from_string(std::string_view s) {
  if (s == "paper") return ZeemanSign::Paper;
  if (s == "physical") return ZeemanSign::Physical;
  throw NotFound("unknown zeeman sign: " + std::string(s));
}

UnitConvention unit_convention_from_string(std::string_view s) {
  if (s == "full") return UnitConvention::Full;
  if (s == "reduced") return UnitConvention::Reduced;
  throw NotFound("unknown unit convention: " + std::string(s));
}

json meta_to_json(const RunMetadata& meta) {
  json m;
  m["timestamp"] = meta.timestamp;
  m["qubit_mapping"] = meta.qubit_mapping;
  m["zeeman_sign"] = to_string(meta.zeeman_sign);
  m["eta_sign_convention"] = meta.eta_sign_convention;
  m["eof_x_convention"] = meta.eof_x_convention;
  m["hermitian_tol"] = meta.hermitian_tol;
  if (meta.unit_convention) m["unit_convention"] = to_string(*meta.unit_convention);
  if (meta.ratio) m["ratio"] = *meta.ratio;
  if (meta.threshold) m["threshold"] = *meta.threshold;
  if (meta.tol) m["tol"] = *meta.tol;
  return m;
}

json to_json(const SweepResult& result) {
  json rows = json::array();
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    json r;
    for (size_t a = 0; a < result.axis_names.size(); ++a)
      r[result.axis_names[a]] = row.axis_values[a];
    for (size_t e = 0; e < result.extra_names.size(); ++e)
      r[result.extra_names[e]] = result.extra_values[i][e];
    r["concurrence"] = row.concurrence;
    r["eof"] = row.eof;
    r["entropy_a"] = row.entropy_a;
    rows.push_back(std::move(r));
  }
  return json{{"rows", std::move(rows)}, {"meta", meta_to_json(result.meta)}};
}

json to_json(const EntanglementReport& report, const RunMetadata& meta) {
  return json{{"concurrence", report.concurrence},
              {"eof", report.eof},
              {"entropy_a", report.entropy_a},
              {"entropy_b", report.entropy_b},
              {"nu", report.nu},
              {"meta", meta_to_json(meta)}};
}

json to_json(const CriticalPoint& cp, const RunMetadata& meta) {
  return json{{"beta_star", cp.beta_star},
              {"ratio", cp.ratio},
              {"bracket", {cp.bracket.first, cp.bracket.second}},
              {"threshold", cp.threshold},
              {"meta", meta_to_json(meta)}};
}

json to_json(const AngleOptimum& opt, const RunMetadata& meta) {
  return json{{"theta_star", opt.theta_star},
              {"phi_star", opt.phi_star},
              {"c_star", opt.c_star},
              {"meta", meta_to_json(meta)}};
}

json to_json(const ModelParams& params, const RunMetadata& meta) {
  return json{{"alpha", params.alpha},
              {"beta", params.beta},
              {"eta", params.eta},
              {"theta", params.orientation.theta},
              {"phi", params.orientation.phi},
              {"meta", meta_to_json(meta)}};
}

json to_json(const MaterialPreset& preset) {
  return json{{"label", preset.label},
              {"eqq_zz_mhz", preset.eqq_zz_mhz},
              {"eta", preset.eta},
              {"quadrupole_moment_cm2", preset.quadrupole_moment_cm2},
              {"site", preset.site}};
}

json state_to_json(const ComplexMatrix& rho, const RunMetadata& meta) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      row.push_back({rho(i, j).real(), rho(i, j).imag()});
    entries.push_back(std::move(row));
  }
  return json{{"dim", rho.rows()},
              {"entries", std::move(entries)},
              {"meta", meta_to_json(meta)}};
}

namespace {

void write_csv(const SweepResult& result, std::ostream& out) {
  const RunMetadata& m = result.meta;
  out << "# nqrent sweep\n";
  out << "# timestamp: " << m.timestamp << '\n';
  out << "# qubit_mapping: " << m.qubit_mapping[0] << ',' << m.qubit_mapping[1]
      << ',' << m.qubit_mapping[2] << ',' << m.qubit_mapping[3] << '\n';
  out << "# zeeman_sign: " << to_string(m.zeeman_sign) << '\n';
  out << "# eta_sign_convention: " << m.eta_sign_convention << '\n';
  out << "# eof_x_convention: " << m.eof_x_convention << '\n';
  out << "# hermitian_tol: " << format_double(m.hermitian_tol) << '\n';
  if (m.unit_convention)
    out << "# unit_convention: " << to_string(*m.unit_convention) << '\n';
  if (m.ratio) out << "# ratio: " << format_double(*m.ratio) << '\n';
  if (m.threshold) out << "# threshold: " << format_double(*m.threshold) << '\n';
  if (m.tol) out << "# tol: " << format_double(*m.tol) << '\n';

  for (const auto& name : result.axis_names) out << name << ',';
  for (const auto& name : result.extra_names) out << name << ',';
  out << "concurrence,eof,entropy_a\n";

  for (size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    for (double v : row.axis_values) out << format_double(v) << ',';
    if (!result.extra_names.empty())
      for (double v : result.extra_values[i]) out << format_double(v) << ',';
    out << format_double(row.concurrence) << ',' << format_double(row.eof)
        << ',' << format_double(row.entropy_a) << '\n';
  }
}

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& out) {
  if (result.rows.empty()) throw Error("emit_csv: empty result");
  write_csv(result, out);
  if (!out) throw Error("emit_csv: write failure");
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  if (result.rows.empty())
    throw Error("emit_csv: empty result, refusing to create " + path.string());
  std::ofstream out(path);
  if (!out) throw Error("emit_csv: cannot open " + path.string());
  write_csv(result, out);
  if (!out) throw Error("emit_csv: write failure on " + path.string());
}

void emit_json(const json& doc, std::ostream& out) {
  out << doc.dump(2) << '\n';
  if (!out) throw Error("emit_json: write failure");
}

void emit_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("emit_json: cannot open " + path.string());
  emit_json(doc, out);
}

}  // namespace nqrent
