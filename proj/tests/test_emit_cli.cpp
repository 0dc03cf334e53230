#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nqrent/cli.hpp"
#include "nqrent/emit.hpp"
#include "nqrent/scan.hpp"

using namespace nqrent;
using nlohmann::json;

namespace {

SweepResult small_sweep() {
  SweepSpec spec;
  spec.axis1 = {Axis::Alpha, 0.0, 2.0, 2};
  spec.axis2 = AxisSpec{Axis::Beta, 1.0, 6.0, 2};
  spec.fixed = ModelParams(0, 0, 0.14, Orientation(0.94, 0));
  return sweep(spec);
}

// csv body with the timestamp comment dropped
std::string stable_lines(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# timestamp:", 0) != 0) out << line << '\n';
  return out.str();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const std::string kTmp = "/tmp/nqrent_cli_test_out";

}  // namespace

TEST_CASE("format_double: 17 significant digits round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 2.5136621622348554e-1, 1e-300, -7.25, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("emit_csv: structure, determinism, empty input") {
  const SweepResult r = small_sweep();
  std::ostringstream a;
  emit_csv(r, a);

  int comments = 0, rows = 0;
  bool header_seen = false;
  std::istringstream in(a.str());
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      ++comments;
      CHECK_FALSE(header_seen);  // metadata precedes the header
    } else if (!header_seen) {
      header_seen = true;
      CHECK(line == "alpha,beta,concurrence,eof,entropy_a");
    } else {
      ++rows;
    }
  }
  CHECK(comments >= 5);
  CHECK(rows == 4);

  // two runs differ only in the timestamp comment
  std::ostringstream b;
  emit_csv(small_sweep(), b);
  CHECK(stable_lines(a.str()) == stable_lines(b.str()));

  // data rows round-trip to the exact doubles
  std::istringstream again(a.str());
  bool past_header = false;
  size_t idx = 0;
  while (std::getline(again, line)) {
    if (line.rfind('#', 0) == 0) continue;
    if (!past_header) { past_header = true; continue; }
    double a1, a2, c, e, s;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &a1, &a2, &c, &e, &s) == 5);
    CHECK(c == r.rows[idx].concurrence);
    CHECK(e == r.rows[idx].eof);
    CHECK(s == r.rows[idx].entropy_a);
    ++idx;
  }

  SweepResult empty;
  empty.axis_names = {"alpha"};
  std::ostringstream sink;
  CHECK_THROWS_AS(emit_csv(empty, sink), Error);
  const std::filesystem::path p = "/tmp/nqrent_should_not_exist.csv";
  std::filesystem::remove(p);
  CHECK_THROWS_AS(emit_csv(empty, p), Error);
  CHECK_FALSE(std::filesystem::exists(p));  // no file created on error
}

TEST_CASE("emit_json: schema and bit-exact numeric round-trip") {
  const SweepResult r = small_sweep();
  const json doc = to_json(r);
  REQUIRE(doc.contains("rows"));
  REQUIRE(doc.contains("meta"));
  CHECK(doc["meta"].contains("eta_sign_convention"));
  CHECK(doc["meta"].contains("eof_x_convention"));
  CHECK(doc["meta"].contains("qubit_mapping"));
  CHECK(doc["meta"]["zeeman_sign"] == "paper");
  REQUIRE(doc["rows"].size() == 4);

  const json reparsed = json::parse(doc.dump());
  for (size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(reparsed["rows"][i]["concurrence"].get<double>() == r.rows[i].concurrence);
    CHECK(reparsed["rows"][i]["eof"].get<double>() == r.rows[i].eof);
    CHECK(reparsed["rows"][i]["alpha"].get<double>() == r.rows[i].axis_values[0]);
  }

  RunMetadata meta;
  meta.timestamp = "t";
  const EntanglementReport rep{0.5, 0.25, 0.9, 0.8, {0.7, 0.1, 0.05, 0.05}};
  const json jr = to_json(rep, meta);
  for (const char* key : {"concurrence", "eof", "entropy_a", "entropy_b", "nu", "meta"})
    CHECK(jr.contains(key));

  const CriticalPoint cp{0.52, 1.0, {0.51, 0.53}, 1e-6};
  const json jc = to_json(cp, meta);
  for (const char* key : {"beta_star", "ratio", "bracket", "threshold"})
    CHECK(jc.contains(key));
  CHECK(json::parse(jc.dump())["beta_star"].get<double>() == 0.52);
}

TEST_CASE("cli: measure matches the diagonalization oracle values") {
  const std::string out = kTmp + std::string("_measure.json");
  const int code = cli::run({"measure", "--alpha", "2", "--beta", "6", "--eta",
                             "0.14", "--theta", "0.94", "--phi", "0",
                             "--output", out});
  REQUIRE(code == 0);
  const json doc = read_json(out);
  CHECK(doc["concurrence"].get<double>() ==
        doctest::Approx(0.251366216223486).epsilon(1e-9));
  CHECK(doc["eof"].get<double>() == doctest::Approx(0.118670617799696).epsilon(1e-8));
  CHECK(doc["entropy_a"].get<double>() ==
        doctest::Approx(0.24313764716015868).epsilon(1e-9));
  CHECK(doc["entropy_b"].get<double>() ==
        doctest::Approx(0.3109641323402147).epsilon(1e-9));
  REQUIRE(doc["nu"].size() == 4);
  CHECK(doc["nu"][0].get<double>() == doctest::Approx(0.321899487).epsilon(1e-8));
  CHECK(doc["meta"]["qubit_mapping"] == json::array({0, 1, 2, 3}));
}

TEST_CASE("cli: zero field measures as separable") {
  const std::string out = kTmp + std::string("_zero.json");
  REQUIRE(cli::run({"measure", "--alpha", "0", "--beta", "8", "--eta", "0.92",
                    "--theta", "1.0", "--phi", "0.3", "--output", out}) == 0);
  CHECK(read_json(out)["concurrence"].get<double>() < 1e-10);
}

TEST_CASE("cli: state emits the density matrix") {
  const std::string out = kTmp + std::string("_state.json");
  REQUIRE(cli::run({"state", "--alpha", "1", "--beta", "0", "--output", out}) == 0);
  const json doc = read_json(out);
  CHECK(doc["dim"] == 4);
  const double z = std::exp(-1.5) + std::exp(-0.5) + std::exp(0.5) + std::exp(1.5);
  CHECK(doc["entries"][0][0][0].get<double>() ==
        doctest::Approx(std::exp(-1.5) / z).epsilon(1e-12));
  CHECK(doc["entries"][0][0][1].get<double>() == 0.0);

  const std::string csv = kTmp + std::string("_state.csv");
  REQUIRE(cli::run({"state", "--alpha", "1", "--format", "csv", "--output", csv}) == 0);
  CHECK(slurp(csv).find("i,j,re,im") != std::string::npos);
}

TEST_CASE("cli: degrees flag converts angles") {
  const std::string a = kTmp + std::string("_rad.json");
  const std::string b = kTmp + std::string("_deg.json");
  REQUIRE(cli::run({"measure", "--alpha", "2", "--beta", "6", "--eta", "0.14",
                    "--theta", "1.5707963267948966", "--output", a}) == 0);
  REQUIRE(cli::run({"measure", "--alpha", "2", "--beta", "6", "--eta", "0.14",
                    "--theta", "90", "--degrees", "--output", b}) == 0);
  CHECK(read_json(a)["concurrence"].get<double>() ==
        doctest::Approx(read_json(b)["concurrence"].get<double>()).epsilon(1e-12));
}

TEST_CASE("cli: sweep csv and json outputs") {
  const std::string csv = kTmp + std::string("_sweep.csv");
  REQUIRE(cli::run({"sweep", "--grid", "alpha:0:4:3", "--grid", "beta:1:6:2",
                    "--eta", "0.14", "--theta", "0.94", "--format", "csv",
                    "--output", csv}) == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("alpha,beta,concurrence,eof,entropy_a") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 7);  // meta + header + 6 rows

  const std::string j = kTmp + std::string("_sweep.json");
  REQUIRE(cli::run({"sweep", "--grid", "beta:0.1:5:4", "--ratio", "1", "--eta",
                    "0.14", "--theta", "0.94", "--output", j}) == 0);
  const json doc = read_json(j);
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["meta"]["ratio"].get<double>() == 1.0);
}

TEST_CASE("cli: scan-temp, critical, optimize, convert") {
  const std::string scan = kTmp + std::string("_scan.json");
  REQUIRE(cli::run({"scan-temp", "--ratio", "1", "--eta", "0.14", "--theta",
                    "0.94", "--grid", "beta:0.1:20:25", "--output", scan}) == 0);
  const json sdoc = read_json(scan);
  REQUIRE(sdoc["rows"].size() == 25);
  CHECK(sdoc["rows"][0]["T"].get<double>() == doctest::Approx(10.0));

  const std::string crit = kTmp + std::string("_crit.json");
  REQUIRE(cli::run({"critical", "--ratio", "1", "--eta", "0.14", "--theta",
                    "0.94", "--phi", "0", "--output", crit}) == 0);
  CHECK(read_json(crit)["beta_star"].get<double>() ==
        doctest::Approx(0.5217).epsilon(0.01));

  // polar axis: computational failure -> exit 1
  CHECK(cli::run({"critical", "--ratio", "1", "--eta", "0.14", "--theta", "0"}) == 1);

  const std::string opt = kTmp + std::string("_opt.json");
  REQUIRE(cli::run({"optimize", "--alpha", "2", "--beta", "3", "--eta", "0.14",
                    "--grid-n", "41", "--refine-iters", "10", "--output", opt}) == 0);
  const json odoc = read_json(opt);
  CHECK(odoc["c_star"].get<double>() > 0.2);
  CHECK(odoc["theta_star"].get<double>() > 0.0);

  const std::string conv = kTmp + std::string("_conv.json");
  REQUIRE(cli::run({"convert", "--material", "cu63-5coord", "--beta", "0.6",
                    "--unit-convention", "full", "--output", conv}) == 0);
  CHECK(read_json(conv)["temp_k"].get<double>() == doctest::Approx(5.0e-3).epsilon(0.02));

  const std::string crit_csv = kTmp + std::string("_crit.csv");
  REQUIRE(cli::run({"critical", "--ratio", "1", "--eta", "0.14", "--theta",
                    "0.94", "--format", "csv", "--output", crit_csv}) == 0);
  const std::string csv_text = slurp(crit_csv);
  CHECK(csv_text.find("beta_star,ratio,bracket_lo,bracket_hi,threshold") !=
        std::string::npos);

  const std::string conv2 = kTmp + std::string("_conv2.json");
  REQUIRE(cli::run({"convert", "--material", "cu63-5coord", "--gamma-mhz-per-t",
                    "11.285", "--field-t", "0.5", "--temp-k", "0.001",
                    "--unit-convention", "reduced", "--output", conv2}) == 0);
  const json cdoc = read_json(conv2);
  CHECK(cdoc["beta"].get<double>() ==
        doctest::Approx(6.62607015e-34 * (62.8e6 / 12.0) /
                        (1.380649e-23 * 0.001)).epsilon(1e-12));
  CHECK(cdoc["eta"].get<double>() == doctest::Approx(0.14));
  CHECK(cdoc["meta"]["unit_convention"] == "reduced");
}

TEST_CASE("cli: presets listing and NQR_PRESETS") {
  const std::string out = kTmp + std::string("_presets.json");
  REQUIRE(cli::run({"presets", "--output", out}) == 0);
  const json doc = read_json(out);
  bool found = false;
  for (const auto& p : doc)
    if (p["label"] == "cu63-5coord") {
      found = true;
      CHECK(p["eqq_zz_mhz"].get<double>() == doctest::Approx(62.8));
      CHECK(p["eta"].get<double>() == doctest::Approx(0.14));
    }
  CHECK(found);

  const std::string extra = kTmp + std::string("_extra_presets.json");
  {
    std::ofstream f(extra);
    f << R"([{"label":"env-site","eqq_zz_mhz":5.0,"eta":0.1}])";
  }
  setenv("NQR_PRESETS", extra.c_str(), 1);
  const std::string out2 = kTmp + std::string("_presets2.json");
  REQUIRE(cli::run({"presets", "--output", out2}) == 0);
  unsetenv("NQR_PRESETS");
  bool env_found = false;
  for (const auto& p : read_json(out2))
    if (p["label"] == "env-site") env_found = true;
  CHECK(env_found);
}

TEST_CASE("cli: usage errors exit with code 2 before computing") {
  CHECK(cli::run({}) == 2);
  CHECK(cli::run({"measure", "--eta", "1.5"}) == 2);
  CHECK(cli::run({"measure", "--theta", "4.0"}) == 2);
  CHECK(cli::run({"measure", "--phi", "6.5"}) == 2);
  CHECK(cli::run({"measure", "--no-such-flag", "1"}) == 2);
  CHECK(cli::run({"sweep", "--eta", "0.14"}) == 2);               // missing --grid
  CHECK(cli::run({"sweep", "--grid", "alpha:0:1:1"}) == 2);       // count < 2
  CHECK(cli::run({"sweep", "--grid", "alpha:1:0:5"}) == 2);       // min >= max
  CHECK(cli::run({"sweep", "--grid", "junk:0:1:5"}) == 2);        // unknown axis
  CHECK(cli::run({"sweep", "--grid", "theta:0:4:5"}) == 2);       // theta beyond pi
  CHECK(cli::run({"sweep", "--grid", "eta:0:2:5"}) == 2);         // eta beyond 1
  CHECK(cli::run({"sweep", "--grid", "T:-1:2:5"}) == 2);          // nonpositive T
  CHECK(cli::run({"sweep", "--grid", "alpha:0:1:5", "--grid", "beta:0:1:5",
                  "--ratio", "1"}) == 2);                          // alpha under ratio
  CHECK(cli::run({"sweep", "--grid", "alpha:0:1:5", "--grid", "beta:0:1:5",
                  "--grid", "eta:0:1:5"}) == 2);                   // more than two grids
  CHECK(cli::run({"scan-temp", "--eta", "0.14"}) == 2);            // missing --ratio
  CHECK(cli::run({"convert", "--material", "cu63-5coord", "--temp-k", "-1"}) == 2);
  CHECK(cli::run({"convert", "--material", "nope", "--temp-k", "1"}) == 2);
  CHECK(cli::run({"convert", "--temp-k", "1"}) == 2);              // no material
  CHECK(cli::run({"measure", "--mapping", "0", "1", "1", "2"}) == 2);
  CHECK(cli::run({"optimize", "--grid-n", "1"}) == 2);
}

TEST_CASE("cli: help exits 0") {
  CHECK(cli::run({"--help"}) == 0);
  CHECK(cli::run({"measure", "--help"}) == 0);
  CHECK(cli::run({"sweep", "--help"}) == 0);
}
