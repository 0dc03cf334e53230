#pragma once

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <iosfwd>

#include "nqrent/scan.hpp"

namespace nqrent {

/// One double, 17 significant digits: round-trips exactly through a parser.
std::string format_double(double v);

std::string to_string(ZeemanSign s);
std::string to_string(UnitConvention c);
ZeemanSign zeeman_sign_from_string(std::string_view s);
UnitConvention unit_convention_from_string(std::string_view s);

nlohmann::json meta_to_json(const RunMetadata& meta);
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const EntanglementReport& report, const RunMetadata& meta);
nlohmann::json to_json(const CriticalPoint& cp, const RunMetadata& meta);
nlohmann::json to_json(const AngleOptimum& opt, const RunMetadata& meta);
nlohmann::json to_json(const ModelParams& params, const RunMetadata& meta);
nlohmann::json to_json(const MaterialPreset& preset);
nlohmann::json state_to_json(const ComplexMatrix& rho, const RunMetadata& meta);

/// CSV with #-prefixed metadata comments, then a header row, then one data
/// row per grid point in deterministic order. Throws on an empty result
/// before any file is created.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

void emit_json(const nlohmann::json& doc, std::ostream& out);
void emit_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace nqrent
