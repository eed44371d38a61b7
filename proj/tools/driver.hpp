// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file driver.hpp
 * @brief Batch drivers behind the command-line tool: single runs, geometry
 * scans and comparison tables.
 */

#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqeac/fermion.hpp"

namespace vqeac::driver {

enum class Method { hf, fci, casci, casscf, uccsd, oo_uccd, adapt, adapt_scf, qubit_adapt,
                    qubit_adapt_scf };
enum class Correction { none, ac0, ac };

const char* to_string(Method m);
const char* to_string(Correction c);
/// "oo-uccd" or "oo-uccd+ac0". Throws ConfigError on unknown names.
std::pair<Method, Correction> parse_method(const std::string& spec);

struct RunConfig {
  std::string fcidump;
  std::optional<std::pair<int, int>> cas;  ///< (n_elec, n_orb); unset = full space
  Method method = Method::hf;
  Correction correction = Correction::none;
  Encoding encoding = Encoding::parity;
  std::optional<int> ms2;  ///< overrides the FCIDUMP MS2
  double vqe_gtol = 1e-6;
  int vqe_max_iter = 500;
  int adapt_max_iter = 30;
  double adapt_eps_grad = 1e-4;
  double orbital_gtol = 1e-5;
  int max_macro = 100;
  std::optional<bool> active_active;
  int quadrature_nodes = 5;
  bool force = false;
  /// Largest determinant space for the in-repo FCI oracle.
  std::size_t fci_oracle_limit = 200000;
  /// Adds wall-clock seconds to the record; off by default so records stay
  /// byte-identical across runs.
  bool timings = false;
};

/// Reads the keys of a JSON config into `cfg`; relative paths are resolved
/// against `base_dir`. Unknown keys are a ConfigError.
void apply_config(const nlohmann::json& j, const std::string& base_dir, RunConfig& cfg);

/// Throws ConfigError for incompatible method / correction pairs.
void validate(const RunConfig& cfg);

/// Executes one pipeline and returns its record.
nlohmann::json run_single(const RunConfig& cfg);

struct ScanPoint {
  std::string fcidump;
  double parameter = 0.0;
};

struct ScanConfig {
  RunConfig base;
  std::vector<ScanPoint> points;
  std::vector<std::string> methods;  ///< method specs, e.g. "oo-uccd+ac0"
};

ScanConfig parse_scan_config(const nlohmann::json& j, const std::string& base_dir);

/// One record per point and method, points in ascending parameter order.
std::vector<nlohmann::json> run_scan(const ScanConfig& cfg);
void write_scan_csv(const std::vector<nlohmann::json>& records, std::ostream& os);
/// Gnuplot script plotting E_total against the parameter per method.
void write_gnuplot(const std::vector<std::string>& methods, const std::string& csv_path,
                   std::ostream& os);

/// Aligned text table of run records, with singlet-triplet gap rows when a
/// method appears with ms2 = 0 and ms2 = 2 on the same fixture.
void emit_comparison_table(const std::vector<nlohmann::json>& records, std::ostream& os);

/// Fixed-format number used in CSV and tables (12 significant digits).
std::string format_number(double x);

}  // namespace vqeac::driver
