// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "driver.hpp"
#include "support.hpp"
#include "vqeac/ac.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"
#include "vqeac/orbital_opt.hpp"

using namespace vqeac;
using namespace vqeac::driver;
using nlohmann::json;
using Catch::Approx;

namespace {

namespace fs = std::filesystem;

RunConfig config(const std::string& fixture, const std::string& method) {
  RunConfig c;
  c.fcidump = testing::fixture(fixture);
  std::tie(c.method, c.correction) = parse_method(method);
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "vqeac_test_cli";
  fs::create_directories(d);
  return d;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(VQEAC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(VQEAC_TEST_DATA) + "/" + name; }

const std::vector<json>& n2_scan() {
  static const std::vector<json> records = [] {
    std::ifstream in(data("n2_scan.json"));
    return run_scan(parse_scan_config(json::parse(in), VQEAC_TEST_DATA));
  }();
  return records;
}

double field(const std::vector<json>& recs, double r, const std::string& label) {
  for (const auto& x : recs)
    if (x["parameter"].get<double>() == r && x["label"] == label) return x["e_total"];
  FAIL("missing record " << label << " at " << r);
  return 0.0;
}

}  // namespace

TEST_CASE("method specs parse and round-trip", "[cli]") {
  for (const char* m : {"hf", "fci", "casci", "casscf", "uccsd", "oo-uccd", "adapt", "adapt-scf",
                        "qubit-adapt", "qubit-adapt-scf"}) {
    const auto [method, corr] = parse_method(m);
    CHECK(std::string(to_string(method)) == m);
    CHECK(corr == Correction::none);
  }
  const auto [m, c] = parse_method("oo-uccd+ac0");
  CHECK(m == Method::oo_uccd);
  CHECK(c == Correction::ac0);
  CHECK_THROWS_AS(parse_method("mp2"), ConfigError);
  CHECK_THROWS_AS(parse_method("casci+ac2"), ConfigError);
}

TEST_CASE("method and correction compatibility", "[cli]") {
  CHECK_THROWS_AS(validate(config("h2_631g_1.0", "hf+ac0")), ConfigError);
  CHECK_THROWS_AS(validate(config("h2_631g_1.0", "fci+ac")), ConfigError);
  CHECK_THROWS_AS(validate(config("h2_631g_1.0", "uccsd+ac0")), ConfigError);
  CHECK_THROWS_AS(validate(config("h2_631g_1.0", "qubit-adapt+ac")), ConfigError);
  CHECK_NOTHROW(validate(config("h2_631g_1.0", "casci+ac0")));
  CHECK_NOTHROW(validate(config("h2_631g_1.0", "casscf+ac")));
  CHECK_NOTHROW(validate(config("h2_631g_1.0", "qubit-adapt-scf+ac0")));
  RunConfig forced = config("h2_631g_1.0", "uccsd+ac0");
  forced.force = true;
  CHECK_NOTHROW(validate(forced));
  CHECK_THROWS_AS(validate(RunConfig{}), ConfigError);
}

TEST_CASE("config files reject unknown keys and resolve relative paths", "[cli]") {
  RunConfig c;
  apply_config(json{{"fcidump", "x.fcidump"}, {"cas", {2, 2}}, {"method", "oo-uccd+ac0"},
                    {"orbital", {{"active_active", false}}}},
               "/base", c);
  CHECK(c.fcidump == "/base/x.fcidump");
  REQUIRE(c.cas);
  CHECK(c.cas->second == 2);
  CHECK(c.correction == Correction::ac0);
  CHECK(c.active_active == false);
  CHECK_THROWS_AS(apply_config(json{{"methd", "hf"}}, "", c), ConfigError);
  CHECK_THROWS_AS(apply_config(json{{"vqe", {{"tol", 1e-6}}}}, "", c), ConfigError);
  CHECK_THROWS_AS(apply_config(json{{"cas", {2}}}, "", c), ConfigError);
  CHECK_THROWS_AS(apply_config(json{{"ms2", "two"}}, "", c), ConfigError);
  CHECK_THROWS_AS(apply_config(json{{"encoding", "bk"}}, "", c), ConfigError);
}

TEST_CASE("fci and hf runs reproduce the oracle and reference energies", "[cli]") {
  for (const char* f : {"h2_sto3g_0.735", "h2_631g_1.0", "lih_sto3g_1.6"}) {
    const FixtureMeta meta = load_fixture_meta(testing::fixture_meta(f));
    const json fci = run_single(config(f, "fci"));
    REQUIRE(meta.fci_energy);
    CHECK(fci["e_total"].get<double>() == Approx(*meta.fci_energy).margin(1e-9));
    CHECK(fci["e_total"].get<double>() == Approx(fci_energy(testing::load(f))).margin(1e-12));
    CHECK(fci["pct_corr"].get<double>() == Approx(100.0).margin(1e-9));
    CHECK(fci["e_corr"].get<double>() == 0.0);

    const json hf = run_single(config(f, "hf"));
    CHECK(hf["e_total"].get<double>() == Approx(meta.hf_energy).margin(1e-8));
    CHECK(hf["e_total"].get<double>() == hf_energy(testing::load(f)));
    CHECK(hf["pct_corr"].get<double>() == Approx(0.0).margin(1e-12));
    CHECK(hf["versions"]["vqeac"] == VQEAC_VERSION);
    CHECK(hf["versions"]["fixture_engine"].get<std::string>().find("pyscf") == 0);
  }
}

TEST_CASE("oo-uccd+ac0 adds the module correction on CAS(2,2)", "[cli]") {
  RunConfig c = config("h2_631g_1.0", "oo-uccd+ac0");
  c.cas = std::pair{2, 2};
  const json rec = run_single(c);
  const double e_corr = rec["e_corr"];
  CHECK(std::abs(e_corr) > 1e-4);
  CHECK(rec["e_total"].get<double>() == Approx(rec["e_ref"].get<double>() + e_corr).margin(1e-14));
  CHECK(rec["converged"] == true);
  CHECK(rec["cnots"].get<long>() > 0);
  CHECK(rec["traces"]["macro"].size() >= 1);
  CHECK(rec["ac"]["method"] == "AC0");

  // Same numbers straight from the modules.
  const IntegralSet ints = testing::load("h2_631g_1.0");
  const MacroResult m = macro_iterate(ints, ActiveSpace::from_counts(ints, 2, 2), MacroOptions{});
  AcOptions ao;
  ao.orbital_optimized = true;
  const ACResult ac = ac0_correction(m.ints, m.cas, m.rdms, ao);
  CHECK(rec["e_ref"].get<double>() == Approx(m.energy).margin(1e-12));
  CHECK(e_corr == Approx(ac.e_corr).margin(1e-12));
}

TEST_CASE("forced corrections on non-optimized references carry a warning", "[cli]") {
  RunConfig c = config("h2_631g_1.0", "uccsd+ac0");
  c.cas = std::pair{2, 2};
  c.force = true;
  const json rec = run_single(c);
  CHECK_FALSE(rec["warnings"].empty());
}

TEST_CASE("timings only appear on request", "[cli]") {
  RunConfig c = config("h2_sto3g_0.735", "casci");
  CHECK_FALSE(run_single(c).contains("timings"));
  c.timings = true;
  CHECK(run_single(c)["timings"]["total_s"].get<double>() >= 0.0);
}

TEST_CASE("N2 scan emits one row per point and method", "[cli][scan]") {
  const auto& recs = n2_scan();
  REQUIRE(recs.size() == 7 * 4);
  std::ostringstream csv;
  write_scan_csv(recs, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "parameter,fixture,method,e_ref,e_corr,e_total,pct_corr,cnots");
  int rows = 0;
  double last = -1.0;
  while (std::getline(lines, line)) {
    ++rows;
    const double r = std::stod(line.substr(0, line.find(',')));
    CHECK(r >= last);
    last = r;
    if (line.find(",fci,") != std::string::npos) {
      const auto parts = line.substr(0, line.rfind(','));
      CHECK(parts.substr(parts.rfind(',') + 1) == "100");
    }
  }
  CHECK(rows == 28);
  for (const auto& x : recs) CHECK(x["fixture"].get<std::string>().rfind("n2_sto3g_", 0) == 0);
}

TEST_CASE("N2 scan: UCCSD tracks CASCI at short r and departs when stretched", "[cli][scan]") {
  const auto& recs = n2_scan();
  const std::vector<double> rs = {1.0, 1.1, 1.3, 1.5, 1.75, 2.0, 2.5};
  std::vector<double> gap;
  for (double r : rs) {
    const double hf = field(recs, r, "hf"), fci = field(recs, r, "fci");
    const double casci = field(recs, r, "casci"), uccsd = field(recs, r, "uccsd");
    CHECK(hf >= uccsd - 1e-9);
    CHECK(uccsd >= casci - 1e-9);
    CHECK(casci >= fci - 1e-9);
    gap.push_back(uccsd - casci);
  }
  // Strictly increasing from equilibrium through 1.75 A. Beyond that the
  // HF-started UCCSD optimization lands in a different basin (see README).
  for (std::size_t i = 1; i < 5; ++i) CHECK(gap[i] > gap[i - 1]);
  CHECK(gap[0] < 1e-3);
  CHECK(*std::max_element(gap.begin() + 3, gap.end()) > 10.0 * gap[0]);
}

TEST_CASE("scan config validation", "[cli][scan]") {
  CHECK_THROWS_AS(parse_scan_config(json{{"method", "hf"}}, ""), ConfigError);
  CHECK_THROWS_AS(parse_scan_config(json{{"points", {{{"fcidump", "a"}, {"r", 1.0}}}}}, ""),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_scan_config(json{{"points", json::array()}, {"methods", {"hf", "nope"}}}, ""),
      ConfigError);
  ScanConfig sc = parse_scan_config(
      json{{"points", {{{"fcidump", "b"}, {"parameter", 2.0}}, {{"fcidump", "a"}, {"parameter", 1.0}}}},
           {"method", "casci+ac0"}},
      "/d");
  CHECK(sc.points[0].fcidump == "/d/a");
  CHECK(sc.methods == std::vector<std::string>{"casci+ac0"});
  sc.methods = {"hf+ac0"};
  CHECK_THROWS_AS(run_scan(sc), ConfigError);
}

TEST_CASE("gnuplot stub references every method", "[cli][scan]") {
  std::ostringstream os;
  write_gnuplot({"casci", "oo-uccd+ac0"}, "scan.csv", os);
  const std::string s = os.str();
  CHECK(s.find("set datafile separator ','") != std::string::npos);
  CHECK(s.find("'oo-uccd+ac0'") != std::string::npos);
  CHECK(s.find("'casci'") != std::string::npos);
}

TEST_CASE("comparison table", "[cli][table]") {
  std::ostringstream empty;
  emit_comparison_table({}, empty);
  CHECK(empty.str() == "fixture  method  ms2  E_ref/Eh  E_corr/Eh  E_total/Eh  %corr  CNOTs\n");

  json a = {{"fixture", "m"}, {"method", "casci"}, {"correction", "none"}, {"ms2", 0},
            {"e_ref", -1.5}, {"e_corr", 0.0}, {"e_total", -1.5}, {"pct_corr", nullptr},
            {"cnots", nullptr}};
  std::ostringstream one;
  emit_comparison_table({a}, one);
  std::istringstream lines(one.str());
  std::string head, row, extra;
  std::getline(lines, head);
  std::getline(lines, row);
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(row.rfind("m  ", 0) == 0);
  CHECK(row.find("-1.5") != std::string::npos);
  // Columns line up with the header.
  CHECK(row.find("-1.5") == head.find("E_ref/Eh"));

  json t = a;
  t["ms2"] = 2;
  t["e_total"] = -1.4987654321;
  std::ostringstream gap;
  emit_comparison_table({a, t}, gap);
  CHECK(gap.str().find("gap(T-S)/mEh") != std::string::npos);
  CHECK(gap.str().find("m  casci  " + format_number(1000.0 * (-1.4987654321 + 1.5))) !=
        std::string::npos);
}

TEST_CASE("triplet runs give the FCI gap of the spin sectors", "[cli][table]") {
  RunConfig s = config("h4_square_sto3g_0.9", "casci"), t = s;
  t.ms2 = 2;
  const json rs = run_single(s), rt = run_single(t);
  CHECK(rt["ms2"] == 2);
  const IntegralSet ints = testing::load("h4_square_sto3g_0.9");
  const EmbeddedHamiltonian emb = embed_active_space(ints, ActiveSpace::full(ints));
  const double e_t = fci_solve(emb, 3, 1, {}).energies[0];
  CHECK(rt["e_total"].get<double>() == Approx(e_t).margin(1e-9));
  std::ostringstream os;
  emit_comparison_table({rs, rt}, os);
  CHECK(os.str().find(format_number(1000.0 * (e_t - rs["e_total"].get<double>())).substr(0, 8)) !=
        std::string::npos);
  t.ms2 = 1;
  CHECK_THROWS_AS(run_single(t), ConfigError);
}

TEST_CASE("numbers use 12 significant digits", "[cli]") {
  CHECK(format_number(-107.549300958123) == "-107.549300958");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(100.0) == "100");
}

TEST_CASE("CLI exit codes", "[cli][binary]") {
  const std::string h2 = testing::fixture("h2_sto3g_0.735");
  const std::string out = (scratch_dir() / "run.json").string();
  CHECK(cli("run " + h2 + " --method fci --out " + out) == 0);
  CHECK(json::parse(slurp(out))["method"] == "fci");
  CHECK(cli("fci " + h2 + " --roots 2") == 0);
  CHECK(cli("--bogus") == 2);
  CHECK(cli("run " + h2 + " --method mp2") == 2);
  CHECK(cli("run " + h2 + " --method uccsd+ac0") == 2);
  CHECK(cli("run " + h2 + " --method casci --cas 2") == 2);
  CHECK(cli("run missing.fcidump --method hf") == 2);
  CHECK(cli("scan") == 2);
  CHECK(cli("table " + out) == 0);
  // One orbital for four electrons cannot be an active space.
  CHECK(cli("run " + testing::fixture("h4_square_sto3g_0.9") + " --method casci --cas 4,1") == 2);
  // A statevector beyond the size limit is a numerical failure.
  CHECK(cli("run " + testing::fixture("n2_ccpvdz_2.5") + " --method uccsd") == 3);
}

TEST_CASE("CLI outputs are byte-identical across runs", "[cli][binary]") {
  const fs::path d = scratch_dir();
  const std::string f = testing::fixture("lih_sto3g_1.6");
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    REQUIRE(cli("run " + f + " --method oo-uccd+ac0 --cas 2,2 --out " +
                (d / ("det" + tag + ".json")).string()) == 0);
  }
  CHECK(slurp((d / "det0.json").string()) == slurp((d / "det1.json").string()));

  const std::string cfg = (d / "scan.json").string();
  {
    std::ofstream o(cfg);
    o << json{{"cas", {2, 2}},
              {"methods", {"hf", "casscf+ac0", "oo-uccd+ac0"}},
              {"points",
               {{{"fcidump", testing::fixture("lih_sto3g_2.0")}, {"parameter", 2.0}},
                {{"fcidump", testing::fixture("lih_sto3g_1.2")}, {"parameter", 1.2}}}}}
             .dump();
  }
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    REQUIRE(cli("scan --config " + cfg + " --out " + (d / ("scan" + tag + ".csv")).string() +
                " --json " + (d / ("scan" + tag + ".rec.json")).string()) == 0);
  }
  CHECK(slurp((d / "scan0.csv").string()) == slurp((d / "scan1.csv").string()));
  CHECK(slurp((d / "scan0.rec.json").string()) == slurp((d / "scan1.rec.json").string()));
  CHECK(fs::exists(d / "scan0.gp"));
  const std::string csv = slurp((d / "scan0.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}
