// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file orbital_opt.hpp
 * @brief Two-step orbital optimization: an inner active-space solve and an
 * outer preconditioned BFGS over orbital rotations at fixed RDMs.
 *
 * Rotations act as phi' = phi exp(kappa). Parameters are the lower-triangle
 * entries kappa_pq (p > q) of the enabled classes.
 */

#pragma once

#include <functional>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqeac/ansatz.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/integrals.hpp"
#include "vqeac/rdm.hpp"
#include "vqeac/vqe.hpp"

namespace vqeac {

/// Which rotation classes are optimized.
struct RotationClasses {
  bool inactive_active = true;
  bool inactive_virtual = true;
  bool active_virtual = true;
  bool active_active = true;
};

/// Non-redundant (p, q), p > q, pairs of the enabled classes.
std::vector<std::pair<int, int>> rotation_pairs(const ActiveSpace& cas, int n_orb,
                                                const RotationClasses& cls);

/// Generalized Fock matrix F_pq = sum_r D_pr h_qr + sum_rst D2_psrt (qr|st).
Mat generalized_fock(const FullSpaceRdm& rdm, const IntegralSet& ints);

/// dE/dkappa_pq = 2 (F_qp - F_pq); antisymmetric, zero outside enabled
/// classes.
Mat orbital_gradient(const FullSpaceRdm& rdm, const IntegralSet& ints,
                     const RotationClasses& cls = {});

/// Exact second derivatives d2E/dkappa_pq^2 at fixed RDMs, one per
/// rotation pair.
Vec orbital_hessian_diagonal_raw(const FullSpaceRdm& rdm, const IntegralSet& ints,
                                 const std::vector<std::pair<int, int>>& pairs);
/// Raw diagonal shifted uniformly so that its minimum is at least `floor`.
Vec orbital_hessian_diagonal(const FullSpaceRdm& rdm, const IntegralSet& ints,
                             const std::vector<std::pair<int, int>>& pairs,
                             double floor = 0.1);

/// Energy of fixed RDMs with integrals rotated by exp(kappa).
double fixed_rdm_energy(const FullSpaceRdm& rdm, const IntegralSet& ints, const Mat& kappa);
/// Gradient of fixed_rdm_energy with respect to kappa (exact at any kappa).
Mat fixed_rdm_gradient(const FullSpaceRdm& rdm, const IntegralSet& ints, const Mat& kappa,
                       const RotationClasses& cls = {});

enum class InnerSolver { casci, uccsd, uccd, adapt, qubit_adapt };

struct MacroOptions {
  InnerSolver solver = InnerSolver::uccd;
  Encoding encoding = Encoding::parity;
  /// Unset: on for VQE solvers, off for the exact CAS solver.
  std::optional<bool> active_active;
  int max_macro = 100;
  double gtol = 1e-5;
  double etol = 1e-8;
  int bfgs_max_iter = 20;
  VqeOptions vqe;
  AdaptOptions adapt;
  bool check_rdms = true;
  /// Called with the macro-iteration index and the active RDMs after every
  /// inner solve.
  std::function<void(int, const ReducedDensityMatrices&)> on_inner_solve;
};

struct MacroRecord {
  int iteration = 0;
  double energy = 0.0;
  double grad_inf = 0.0;
  int inner_evaluations = 0;
  double step_norm = 0.0;
};

struct MacroResult {
  double energy = 0.0;
  IntegralSet ints;  ///< integrals in the optimized orbitals
  Mat rotation;      ///< cumulative orbital rotation (old -> new)
  ActiveSpace cas;
  ReducedDensityMatrices rdms;  ///< active RDMs in the optimized orbitals
  VqeResult vqe;
  AnsatzCircuit circuit;
  std::vector<AdaptRecord> adapt_trace;
  std::vector<MacroRecord> trace;
  bool converged = false;
  bool active_active = false;
};

/// Energy rise across a macro-iteration; carries the trace up to the failure.
class MacroIterationError : public NumericalError {
 public:
  MacroIterationError(const std::string& what, std::vector<MacroRecord> trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const std::vector<MacroRecord>& trace() const noexcept { return trace_; }

 private:
  std::vector<MacroRecord> trace_;
};

/// One inner solve on fixed integrals (no orbital optimization).
MacroResult solve_active_space(const IntegralSet& ints, const ActiveSpace& cas,
                               const MacroOptions& opt);

MacroResult macro_iterate(const IntegralSet& ints, const ActiveSpace& cas,
                          const MacroOptions& opt);

/// Returns a copy with the active-active class switched.
MacroOptions toggle_active_active(MacroOptions opt, bool enabled);

void write_macro_trace_csv(const std::vector<MacroRecord>& trace, std::ostream& os);
void dump_rotation(const Mat& u, std::ostream& os);
nlohmann::json to_json(const std::vector<MacroRecord>& trace);

const char* to_string(InnerSolver s);

}  // namespace vqeac
