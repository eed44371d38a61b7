// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "vqeac/ac.hpp"
#include "vqeac/ansatz.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"
#include "vqeac/integrals.hpp"
#include "vqeac/orbital_opt.hpp"

namespace vqeac::driver {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::pair<Method, const char*> kMethods[] = {
    {Method::hf, "hf"},
    {Method::fci, "fci"},
    {Method::casci, "casci"},
    {Method::casscf, "casscf"},
    {Method::uccsd, "uccsd"},
    {Method::oo_uccd, "oo-uccd"},
    {Method::adapt, "adapt"},
    {Method::adapt_scf, "adapt-scf"},
    {Method::qubit_adapt, "qubit-adapt"},
    {Method::qubit_adapt_scf, "qubit-adapt-scf"}};

const std::pair<Correction, const char*> kCorrections[] = {
    {Correction::none, "none"}, {Correction::ac0, "ac0"}, {Correction::ac, "ac"}};

bool orbital_optimized(Method m) {
  return m == Method::casscf || m == Method::oo_uccd || m == Method::adapt_scf ||
         m == Method::qubit_adapt_scf;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / path).string();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string sidecar(const std::string& fcidump) {
  fs::path p(fcidump);
  p.replace_extension(".meta.json");
  return p.string();
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(std::string("unknown key '") + k + "' in " + where);
}

Encoding parse_encoding(const std::string& s) {
  if (s == "parity") return Encoding::parity;
  if (s == "jordan-wigner" || s == "jw") return Encoding::jordan_wigner;
  throw ConfigError("unknown encoding '" + s + "'");
}

json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double fci_dim(const IntegralSet& ints) {
  return binomial(ints.n_orb, ints.n_alpha()) * binomial(ints.n_orb, ints.n_beta());
}

struct Reference {
  IntegralSet ints;
  double e_hf = 0.0;
  std::optional<double> e_fci;
  json versions;
};

Reference load_reference(const RunConfig& cfg) {
  Reference r;
  r.ints = load_fcidump(cfg.fcidump);
  if (cfg.ms2) {
    if ((r.ints.n_elec + *cfg.ms2) % 2 != 0 || *cfg.ms2 < 0 || *cfg.ms2 > r.ints.n_elec)
      throw ConfigError("ms2 " + std::to_string(*cfg.ms2) + " does not fit " +
                        std::to_string(r.ints.n_elec) + " electrons");
    r.ints.ms2 = *cfg.ms2;
  }
  r.e_hf = hf_energy(r.ints);
  r.versions = {{"vqeac", VQEAC_VERSION}};
  std::optional<FixtureMeta> meta;
  if (fs::exists(sidecar(cfg.fcidump))) {
    meta = load_fixture_meta(sidecar(cfg.fcidump));
    r.versions["fixture_engine"] = meta->engine + " " + meta->engine_version;
    r.versions["fixture_generator"] = meta->generator_version;
  }
  if (fci_dim(r.ints) <= double(cfg.fci_oracle_limit))
    r.e_fci = fci_energy(r.ints);
  else if (meta && meta->fci_energy && r.ints.ms2 == 0)
    r.e_fci = meta->fci_energy;
  return r;
}

json run_on(const RunConfig& cfg, const Reference& ref) {
  validate(cfg);
  const IntegralSet& ints = ref.ints;
  json rec;
  rec["fixture"] = stem(cfg.fcidump);
  rec["method"] = to_string(cfg.method);
  rec["correction"] = to_string(cfg.correction);
  rec["encoding"] = to_string(cfg.encoding);
  rec["n_orb"] = ints.n_orb;
  rec["n_elec"] = ints.n_elec;
  rec["ms2"] = ints.ms2;
  rec["e_hf"] = ref.e_hf;
  rec["e_fci"] = nullable(ref.e_fci);
  rec["cnots"] = nullptr;
  rec["n_params"] = nullptr;
  rec["ac"] = nullptr;
  rec["traces"] = {{"macro", json::array()}, {"adapt", json::array()}};
  json warnings = json::array();

  double e_ref = 0.0, e_corr = 0.0;
  bool converged = true;
  if (cfg.method == Method::hf || cfg.method == Method::fci) {
    rec["cas"] = nullptr;
    if (cfg.method == Method::hf) {
      e_ref = ref.e_hf;
    } else {
      e_ref = fci_dim(ints) <= double(cfg.fci_oracle_limit) ? *ref.e_fci : fci_energy(ints);
    }
  } else {
    const ActiveSpace cas = cfg.cas ? ActiveSpace::from_counts(ints, cfg.cas->first,
                                                               cfg.cas->second)
                                    : ActiveSpace::full(ints);
    rec["cas"] = {cas.n_act_elec, cas.n_act()};
    MacroOptions mo;
    mo.encoding = cfg.encoding;
    mo.gtol = cfg.orbital_gtol;
    mo.max_macro = cfg.max_macro;
    mo.active_active = cfg.active_active;
    mo.vqe.gtol = cfg.vqe_gtol;
    mo.vqe.max_iter = cfg.vqe_max_iter;
    mo.adapt.max_iter = cfg.adapt_max_iter;
    mo.adapt.eps_grad = cfg.adapt_eps_grad;
    mo.adapt.vqe = mo.vqe;
    switch (cfg.method) {
      case Method::casci:
      case Method::casscf: mo.solver = InnerSolver::casci; break;
      case Method::uccsd: mo.solver = InnerSolver::uccsd; break;
      case Method::oo_uccd: mo.solver = InnerSolver::uccd; break;
      case Method::adapt:
      case Method::adapt_scf: mo.solver = InnerSolver::adapt; break;
      default: mo.solver = InnerSolver::qubit_adapt; break;
    }
    const MacroResult m = orbital_optimized(cfg.method) ? macro_iterate(ints, cas, mo)
                                                        : solve_active_space(ints, cas, mo);
    e_ref = m.energy;
    converged = m.converged;
    if (orbital_optimized(cfg.method)) {
      rec["traces"]["macro"] = to_json(m.trace);
      rec["active_active"] = m.active_active;
    }
    if (mo.solver != InnerSolver::casci) {
      rec["cnots"] = count_cnots(m.circuit);
      rec["n_params"] = m.circuit.n_params;
    }
    if (!m.adapt_trace.empty()) rec["traces"]["adapt"] = to_json(m.adapt_trace);
    if (cfg.correction != Correction::none) {
      AcOptions ao;
      ao.quadrature_nodes = cfg.quadrature_nodes;
      ao.orbital_optimized = orbital_optimized(cfg.method) || cfg.method == Method::casci;
      const ACResult r = cfg.correction == Correction::ac0
                             ? ac0_correction(m.ints, m.cas, m.rdms, ao)
                             : ac_correction(m.ints, m.cas, m.rdms, ao);
      e_corr = r.e_corr;
      rec["ac"] = to_json(r);
      for (const auto& w : r.warnings) warnings.push_back(w);
    }
  }
  const double e_total = e_ref + e_corr;
  rec["e_ref"] = e_ref;
  rec["e_corr"] = e_corr;
  rec["e_total"] = e_total;
  std::optional<double> pct;
  if (ref.e_fci && std::abs(*ref.e_fci - ref.e_hf) > 1e-12)
    pct = 100.0 * (e_total - ref.e_hf) / (*ref.e_fci - ref.e_hf);
  rec["pct_corr"] = nullable(pct);
  rec["converged"] = converged;
  if (cfg.force && cfg.correction != Correction::none && !orbital_optimized(cfg.method) &&
      cfg.method != Method::casci)
    warnings.push_back("correction applied to a non-optimized reference (--force)");
  rec["warnings"] = warnings;
  rec["versions"] = ref.versions;
  return rec;
}

}  // namespace

const char* to_string(Method m) {
  for (const auto& [k, name] : kMethods)
    if (k == m) return name;
  return "?";
}

const char* to_string(Correction c) {
  for (const auto& [k, name] : kCorrections)
    if (k == c) return name;
  return "?";
}

std::pair<Method, Correction> parse_method(const std::string& spec) {
  const auto plus = spec.find('+');
  const std::string m = spec.substr(0, plus);
  const std::string c = plus == std::string::npos ? "none" : spec.substr(plus + 1);
  std::optional<Method> method;
  std::optional<Correction> corr;
  for (const auto& [k, name] : kMethods)
    if (m == name) method = k;
  for (const auto& [k, name] : kCorrections)
    if (c == name) corr = k;
  if (!method) throw ConfigError("unknown method '" + m + "'");
  if (!corr) throw ConfigError("unknown correction '" + c + "'");
  return {*method, *corr};
}

void apply_config(const json& j, const std::string& base_dir, RunConfig& cfg) {
  check_keys(j,
             {"fcidump", "cas", "method", "correction", "encoding", "ms2", "vqe", "adapt",
              "orbital", "ac", "force", "timings", "fci_oracle_limit", "points", "methods"},
             "config");
  if (j.contains("fcidump")) cfg.fcidump = resolve(get<std::string>(j, "fcidump"), base_dir);
  if (j.contains("cas")) {
    const auto c = get<std::vector<int>>(j, "cas");
    if (c.size() != 2) throw ConfigError("cas must be [n_elec, n_orb]");
    cfg.cas = std::pair{c[0], c[1]};
  }
  if (j.contains("method")) {
    const auto [m, c] = parse_method(get<std::string>(j, "method"));
    cfg.method = m;
    if (get<std::string>(j, "method").find('+') != std::string::npos) cfg.correction = c;
  }
  if (j.contains("correction"))
    cfg.correction = parse_method("hf+" + get<std::string>(j, "correction")).second;
  if (j.contains("encoding")) cfg.encoding = parse_encoding(get<std::string>(j, "encoding"));
  if (j.contains("ms2")) cfg.ms2 = get<int>(j, "ms2");
  if (j.contains("timings")) cfg.timings = get<bool>(j, "timings");
  if (j.contains("force")) cfg.force = get<bool>(j, "force");
  if (j.contains("fci_oracle_limit"))
    cfg.fci_oracle_limit = get<std::size_t>(j, "fci_oracle_limit");
  if (j.contains("vqe")) {
    const json& v = j["vqe"];
    check_keys(v, {"gtol", "max_iter"}, "vqe");
    if (v.contains("gtol")) cfg.vqe_gtol = get<double>(v, "gtol");
    if (v.contains("max_iter")) cfg.vqe_max_iter = get<int>(v, "max_iter");
  }
  if (j.contains("adapt")) {
    const json& a = j["adapt"];
    check_keys(a, {"max_iter", "eps_grad"}, "adapt");
    if (a.contains("max_iter")) cfg.adapt_max_iter = get<int>(a, "max_iter");
    if (a.contains("eps_grad")) cfg.adapt_eps_grad = get<double>(a, "eps_grad");
  }
  if (j.contains("orbital")) {
    const json& o = j["orbital"];
    check_keys(o, {"gtol", "max_macro", "active_active"}, "orbital");
    if (o.contains("gtol")) cfg.orbital_gtol = get<double>(o, "gtol");
    if (o.contains("max_macro")) cfg.max_macro = get<int>(o, "max_macro");
    if (o.contains("active_active")) cfg.active_active = get<bool>(o, "active_active");
  }
  if (j.contains("ac")) {
    const json& a = j["ac"];
    check_keys(a, {"quadrature_nodes"}, "ac");
    if (a.contains("quadrature_nodes")) cfg.quadrature_nodes = get<int>(a, "quadrature_nodes");
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.fcidump.empty()) throw ConfigError("no FCIDUMP given");
  if (cfg.cas && (cfg.cas->first < 0 || cfg.cas->second < 1))
    throw ConfigError("active space needs at least one orbital and no negative electrons");
  if (cfg.correction != Correction::none) {
    if (cfg.method == Method::hf || cfg.method == Method::fci)
      throw ConfigError(std::string("method ") + to_string(cfg.method) +
                        " has no active-space reference for a correction");
    if (!orbital_optimized(cfg.method) && cfg.method != Method::casci && !cfg.force)
      throw ConfigError(std::string("correction ") + to_string(cfg.correction) +
                        " needs an orbital-optimized or exact-CAS reference; method " +
                        to_string(cfg.method) + " is neither (use --force to override)");
  }
  if (cfg.quadrature_nodes < 1) throw ConfigError("quadrature_nodes must be positive");
  if (cfg.vqe_max_iter < 0 || cfg.adapt_max_iter < 0 || cfg.max_macro < 1)
    throw ConfigError("iteration limits must be non-negative");
}

json run_single(const RunConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  json rec = run_on(cfg, load_reference(cfg));
  if (cfg.timings)
    rec["timings"] = {
        {"total_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  return rec;
}

ScanConfig parse_scan_config(const json& j, const std::string& base_dir) {
  ScanConfig sc;
  apply_config(j, base_dir, sc.base);
  if (!j.contains("points")) throw ConfigError("scan config needs 'points'");
  for (const auto& p : j["points"]) {
    check_keys(p, {"fcidump", "parameter"}, "scan point");
    sc.points.push_back({resolve(get<std::string>(p, "fcidump"), base_dir),
                         get<double>(p, "parameter")});
  }
  if (j.contains("methods"))
    sc.methods = get<std::vector<std::string>>(j, "methods");
  else
    sc.methods.push_back(std::string(to_string(sc.base.method)) +
                         (sc.base.correction == Correction::none
                              ? ""
                              : std::string("+") + to_string(sc.base.correction)));
  for (const auto& m : sc.methods) parse_method(m);
  std::stable_sort(sc.points.begin(), sc.points.end(),
                   [](const ScanPoint& a, const ScanPoint& b) { return a.parameter < b.parameter; });
  return sc;
}

std::vector<json> run_scan(const ScanConfig& cfg) {
  // Validate every method before any work starts.
  for (const auto& m : cfg.methods) {
    RunConfig c = cfg.base;
    std::tie(c.method, c.correction) = parse_method(m);
    c.fcidump = "-";
    validate(c);
  }
  const std::size_t np = cfg.points.size(), nm = cfg.methods.size();
  std::vector<json> out(np * nm);
  std::vector<std::exception_ptr> errors(np);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < np; ++i) {
    try {
      RunConfig c = cfg.base;
      c.fcidump = cfg.points[i].fcidump;
      const Reference ref = load_reference(c);
      for (std::size_t k = 0; k < nm; ++k) {
        std::tie(c.method, c.correction) = parse_method(cfg.methods[k]);
        json rec = run_on(c, ref);
        rec["parameter"] = cfg.points[i].parameter;
        rec["label"] = cfg.methods[k];
        out[i * nm + k] = std::move(rec);
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace {

std::string field(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return "";
  if (j[key].is_number_float()) return format_number(j[key].get<double>());
  if (j[key].is_number()) return std::to_string(j[key].get<long>());
  return j[key].get<std::string>();
}

std::string label(const json& rec) {
  if (rec.contains("label")) return rec["label"].get<std::string>();
  const std::string c = rec.value("correction", "none");
  return rec.value("method", "?") + (c == "none" ? "" : "+" + c);
}

}  // namespace

void write_scan_csv(const std::vector<json>& records, std::ostream& os) {
  os << "parameter,fixture,method,e_ref,e_corr,e_total,pct_corr,cnots\n";
  for (const auto& r : records)
    os << field(r, "parameter") << ',' << field(r, "fixture") << ',' << label(r) << ','
       << field(r, "e_ref") << ',' << field(r, "e_corr") << ',' << field(r, "e_total") << ','
       << field(r, "pct_corr") << ',' << field(r, "cnots") << '\n';
}

void write_gnuplot(const std::vector<std::string>& methods, const std::string& csv_path,
                   std::ostream& os) {
  os << "set datafile separator ','\n"
     << "set xlabel 'parameter'\n"
     << "set ylabel 'E_total / Eh'\n"
     << "set key outside\n"
     << "plot";
  for (std::size_t k = 0; k < methods.size(); ++k)
    os << (k ? ", \\\n    " : " ") << "'" << csv_path << "' every ::1 using 1:(strcol(3) eq '"
       << methods[k] << "' ? $6 : 1/0) with linespoints title '" << methods[k] << "'";
  os << '\n';
}

void emit_comparison_table(const std::vector<json>& records, std::ostream& os) {
  const std::vector<std::string> head = {"fixture", "method", "ms2", "E_ref/Eh",
                                         "E_corr/Eh", "E_total/Eh", "%corr", "CNOTs"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : records)
    rows.push_back({field(r, "fixture"), label(r), field(r, "ms2"), field(r, "e_ref"),
                    field(r, "e_corr"), field(r, "e_total"), field(r, "pct_corr"),
                    field(r, "cnots")});
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) s += "  ";
      s += cells[c] + std::string(width[c] - cells[c].size(), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    os << s << '\n';
  };
  line(head);
  for (const auto& row : rows) line(row);

  // Gap rows: E(ms2 = 2) - E(ms2 = 0) per fixture and method.
  std::map<std::pair<std::string, std::string>, std::map<int, double>> by;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& r : records) {
    const auto key = std::pair{field(r, "fixture"), label(r)};
    if (!by.count(key)) order.push_back(key);
    by[key][r.value("ms2", 0)] = r.at("e_total").get<double>();
  }
  bool header = false;
  for (const auto& key : order) {
    const auto& e = by[key];
    if (!e.count(0) || !e.count(2)) continue;
    if (!header) {
      os << "\nfixture  method  gap(T-S)/mEh\n";
      header = true;
    }
    os << key.first << "  " << key.second << "  " << format_number(1000.0 * (e.at(2) - e.at(0)))
       << '\n';
  }
}

}  // namespace vqeac::driver
