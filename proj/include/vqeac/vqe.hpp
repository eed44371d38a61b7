// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file vqe.hpp
 * @brief Fixed-ansatz VQE and the (qubit-)ADAPT loop.
 *
 * Circuits are compiled into rotation-pair lists over a FockBasis; the
 * energy and its gradient (adjoint sweep) are exact for the Trotterized
 * circuit because every generator's Pauli terms commute.
 */

#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <vector>

#include "vqeac/ansatz.hpp"
#include "vqeac/integrals.hpp"
#include "vqeac/kernels.hpp"
#include "vqeac/optimize.hpp"
#include "vqeac/sector.hpp"

namespace vqeac {

/// Hamiltonian and reference state on a simulation basis.
struct VqeProblem {
  FockBasis basis;
  Csr hamiltonian;
  Vec reference;
  std::vector<int> reference_occupation;
  int n_alpha = 0;
  int n_beta = 0;
  int n_spatial = 0;

  /// Particle-number sector basis (fermionic ansätze).
  static VqeProblem sector(const EmbeddedHamiltonian& emb, Encoding enc);
  /// Whole Fock space (Pauli-string ansätze may change particle number).
  static VqeProblem full_space(const EmbeddedHamiltonian& emb, Encoding enc);

  Vec apply_h(const Vec& v) const;
  double energy(const Vec& v) const;
};

/// Circuit lowered onto a basis.
class CompiledCircuit {
 public:
  CompiledCircuit(const AnsatzCircuit& c, const FockBasis& basis);

  int n_params() const noexcept { return n_params_; }
  /// Appends one more entry (used by ADAPT).
  void append(const AnsatzEntry& e, const FockBasis& basis);

  Vec state(const Vec& theta, const Vec& reference) const;
  /// 2 <H psi| G_k psi> for every entry k (selection gradients when the
  /// entries are pool elements).
  Vec generator_gradients(const Vec& psi, const Vec& hpsi) const;
  /// Energy and d/dtheta via the adjoint sweep.
  double energy_and_gradient(const Vec& theta, const VqeProblem& prob, Vec& grad) const;

 private:
  struct Part {
    PairList pairs;
    double factor;
  };
  struct Entry {
    std::vector<Part> parts;
    int param;
  };
  static Entry lower(const AnsatzEntry& e, const FockBasis& basis);
  void rotate(const Entry& e, double theta, Vec& v) const;
  Vec generator_apply(const Entry& e, const Vec& v) const;

  std::vector<Entry> entries_;
  int n_params_ = 0;
};

/// Energy through the 2^n register and a PauliSum (oracle path).
double energy_of(const Vec& theta, const AnsatzCircuit& c, const PauliSum& h);

/// Energy through the compiled circuit.
double energy_of(const Vec& theta, const CompiledCircuit& c, const VqeProblem& prob);
Vec analytic_gradient(const Vec& theta, const CompiledCircuit& c, const VqeProblem& prob);

struct VqeOptions {
  double gtol = 1e-6;
  int max_iter = 500;
};

struct VqeResult {
  double energy = 0.0;
  double reference_energy = 0.0;
  Vec theta;
  Vec state;  ///< optimized vector over the problem basis
  int iterations = 0;
  double grad_norm = 0.0;  ///< infinity norm at exit
  int evaluations = 0;
  bool converged = false;
  nlohmann::json circuit;
};

VqeResult minimize(const AnsatzCircuit& c, const VqeProblem& prob, const Vec& theta0,
                   const VqeOptions& opt = {});

struct AdaptRecord {
  int iteration = 0;
  std::size_t selected = 0;
  std::string label;
  double gradient = 0.0;  ///< |selection gradient|
  double energy = 0.0;
  long cnots = 0;
  int n_params = 0;
};

struct AdaptOptions {
  int max_iter = 30;
  double eps_grad = 1e-4;
  VqeOptions vqe;
};

struct AdaptResult {
  AnsatzCircuit circuit;
  VqeResult vqe;
  std::vector<AdaptRecord> trace;
  bool converged = false;  ///< stopped on the gradient threshold
};

/// Pool elements as circuit entries with parameter ids 0..size-1.
AnsatzCircuit pool_circuit(const OperatorPool& pool, int n_qubits, Encoding enc);

/// Selection gradients <psi|[H, A_k]|psi> for every pool element.
Vec pool_gradients(const OperatorPool& pool, const Vec& psi, const VqeProblem& prob);

/// `start`, when given, seeds the circuit and parameters (warm restart).
AdaptResult adapt_loop(const OperatorPool& pool, const VqeProblem& prob,
                       const AdaptOptions& opt, const AdaptResult* start = nullptr);

void write_trace_csv(const std::vector<AdaptRecord>& trace, std::ostream& os);
nlohmann::json to_json(const VqeResult& r);
nlohmann::json to_json(const std::vector<AdaptRecord>& trace);

}  // namespace vqeac
