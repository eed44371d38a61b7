// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run, scan, table and fci subcommands.
// Exit codes: 0 ok, 2 configuration or input error, 3 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "driver.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"
#include "vqeac/integrals.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vqeac;

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string parent_dir(const std::string& path) {
  return fs::absolute(path).parent_path().string();
}

std::pair<int, int> parse_cas(const std::string& s) {
  int ne = 0, no = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> ne >> comma >> no) || comma != ',' || !in.eof())
    throw ConfigError("--cas expects n_elec,n_orb, got '" + s + "'");
  return {ne, no};
}

/// Writes to `path`, or stdout when empty.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  write(out);
}

struct Flags {
  std::string config, fcidump, method, correction, cas, encoding, out;
  int ms2 = -1;
  bool force = false, timings = false;
};

void apply_flags(const Flags& f, driver::RunConfig& cfg) {
  if (!f.fcidump.empty()) cfg.fcidump = f.fcidump;
  if (!f.method.empty()) {
    const auto [m, c] = driver::parse_method(f.method);
    cfg.method = m;
    if (f.method.find('+') != std::string::npos) cfg.correction = c;
  }
  if (!f.correction.empty()) cfg.correction = driver::parse_method("hf+" + f.correction).second;
  if (!f.cas.empty()) cfg.cas = parse_cas(f.cas);
  if (!f.encoding.empty()) {
    json j = {{"encoding", f.encoding}};
    driver::apply_config(j, "", cfg);
  }
  if (f.ms2 >= 0) cfg.ms2 = f.ms2;
  if (f.force) cfg.force = true;
  if (f.timings) cfg.timings = true;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON configuration file");
  sub->add_option("--method", f.method, "method, optionally with +ac0 or +ac");
  sub->add_option("--correction", f.correction, "none, ac0 or ac");
  sub->add_option("--cas", f.cas, "active space as n_elec,n_orb");
  sub->add_option("--encoding", f.encoding, "parity or jordan-wigner");
  sub->add_option("--ms2", f.ms2, "2 S_z of the target sector");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_flag("--force", f.force, "allow corrections on non-optimized references");
}

int cmd_run(const Flags& f) {
  driver::RunConfig cfg;
  if (!f.config.empty()) driver::apply_config(read_json(f.config), parent_dir(f.config), cfg);
  apply_flags(f, cfg);
  const json rec = driver::run_single(cfg);
  emit(f.out, [&](std::ostream& os) { os << rec.dump(2) << '\n'; });
  return 0;
}

int cmd_scan(const Flags& f, const std::string& json_out) {
  if (f.config.empty()) throw ConfigError("scan needs --config");
  driver::ScanConfig sc = driver::parse_scan_config(read_json(f.config), parent_dir(f.config));
  apply_flags(f, sc.base);
  if (!f.method.empty()) sc.methods = {f.method};
  const auto records = driver::run_scan(sc);
  emit(f.out, [&](std::ostream& os) { driver::write_scan_csv(records, os); });
  if (!f.out.empty()) {
    fs::path gp(f.out);
    gp.replace_extension(".gp");
    emit(gp.string(), [&](std::ostream& os) {
      driver::write_gnuplot(sc.methods, fs::path(f.out).filename().string(), os);
    });
  }
  if (!json_out.empty())
    emit(json_out, [&](std::ostream& os) { os << json(records).dump(2) << '\n'; });
  return 0;
}

int cmd_table(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<json> records;
  for (const auto& path : inputs) {
    const json j = read_json(path);
    if (j.is_array())
      for (const auto& r : j) records.push_back(r);
    else
      records.push_back(j);
  }
  emit(out, [&](std::ostream& os) { driver::emit_comparison_table(records, os); });
  return 0;
}

int cmd_fci(const Flags& f, int n_roots) {
  driver::RunConfig cfg;
  if (!f.config.empty()) driver::apply_config(read_json(f.config), parent_dir(f.config), cfg);
  apply_flags(f, cfg);
  if (cfg.fcidump.empty()) throw ConfigError("no FCIDUMP given");
  IntegralSet ints = load_fcidump(cfg.fcidump);
  if (cfg.ms2) ints.ms2 = *cfg.ms2;
  const ActiveSpace cas = cfg.cas ? ActiveSpace::from_counts(ints, cfg.cas->first, cfg.cas->second)
                                  : ActiveSpace::full(ints);
  cas.validate(ints);
  const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
  FciOptions opt;
  opt.n_roots = n_roots;
  const FciResult r = fci_solve(emb, emb.n_alpha, emb.n_beta, opt);
  json rec = {{"fixture", fs::path(cfg.fcidump).stem().string()},
              {"cas", {cas.n_act_elec, cas.n_act()}},
              {"ms2", ints.ms2},
              {"energies", r.energies},
              {"versions", {{"vqeac", VQEAC_VERSION}}}};
  emit(f.out, [&](std::ostream& os) { os << rec.dump(2) << '\n'; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vqeac: VQE with orbital optimization and adiabatic-connection corrections"};
  app.set_version_flag("--version", VQEAC_VERSION);
  app.require_subcommand(1);

  Flags run_f, scan_f, fci_f;
  std::string table_out, scan_json;
  std::vector<std::string> table_in;
  int n_roots = 1;

  auto* run = app.add_subcommand("run", "single-point calculation, JSON record");
  add_common(run, run_f);
  run->add_option("fcidump", run_f.fcidump, "FCIDUMP file");
  run->add_flag("--timings", run_f.timings, "add wall-clock timings to the record");

  auto* scan = app.add_subcommand("scan", "geometry scan from a config, CSV rows");
  add_common(scan, scan_f);
  scan->add_option("--json", scan_json, "also write the full records as a JSON array");

  auto* table = app.add_subcommand("table", "comparison table from JSON records");
  table->add_option("records", table_in, "JSON record files")->check(CLI::ExistingFile);
  table->add_option("--out", table_out, "output file (default stdout)");

  auto* fci = app.add_subcommand("fci", "exact diagonalization, JSON energies");
  add_common(fci, fci_f);
  fci->add_option("fcidump", fci_f.fcidump, "FCIDUMP file");
  fci->add_option("--roots", n_roots, "number of roots")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) return cmd_run(run_f);
    if (*scan) return cmd_scan(scan_f, scan_json);
    if (*table) return cmd_table(table_in, table_out);
    if (*fci) return cmd_fci(fci_f, n_roots);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const BoundsError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  }
  return 0;
}
