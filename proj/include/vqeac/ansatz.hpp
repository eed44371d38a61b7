// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ansatz.hpp
 * @brief UCC excitation generators, operator pools, Trotterized circuits and
 * the CNOT cost model.
 */

#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vqeac/fermion.hpp"
#include "vqeac/pauli.hpp"

namespace vqeac {

/// coeff * (T - T^dag), T = a^dag_c0 a^dag_c1 ... a_a1 a_a0 for
/// creators {c0, c1} and annihilators {a0, a1} (i<j -> a<b order).
struct Excitation {
  std::vector<int> creators;
  std::vector<int> annihilators;
  double coeff = 1.0;

  /// Ladder string of T, leftmost first.
  std::vector<Ladder> ladder() const;
};

enum class ExcitationKind { single, double_ };

/// A generator with one parameter; spin-complemented pool elements hold two
/// commuting excitations.
struct ExcitationGenerator {
  ExcitationKind kind = ExcitationKind::single;
  std::vector<Excitation> parts;

  FermionOperator op() const;
  std::string label() const;
};

/// One Pauli rotation of a Trotterized generator: exp(-i angle P / 2) with
/// angle = factor * theta.
struct PauliRotation {
  PauliString string;
  double factor = 0.0;
};

struct AnsatzEntry {
  enum class Type { fermionic, pauli };
  Type type = Type::fermionic;
  ExcitationGenerator generator;  ///< used when fermionic
  PauliString pauli;              ///< used when pauli: generator i*P
  int param = 0;
};

enum class PoolFlavor { none, fermionic, qubit };

struct AnsatzCircuit {
  int n_qubits = 0;
  Encoding encoding = Encoding::jordan_wigner;
  std::vector<int> reference;  ///< occupied spin orbitals
  std::vector<AnsatzEntry> entries;
  int n_params = 0;
  PoolFlavor flavor = PoolFlavor::none;

  /// Appends an entry with a fresh parameter id.
  void append(AnsatzEntry e);
};

struct OperatorPool {
  PoolFlavor flavor = PoolFlavor::fermionic;
  std::vector<ExcitationGenerator> fermionic;
  std::vector<PauliString> qubit;
  std::size_t size() const {
    return flavor == PoolFlavor::qubit ? qubit.size() : fermionic.size();
  }
  /// Pool element k as a circuit entry (parameter id unset).
  AnsatzEntry entry(std::size_t k) const;
};

/// Spin orbitals occupied by the lowest-energy determinant.
std::vector<int> reference_occupation(int n_spatial, int n_alpha, int n_beta);

/// Spin-conserving particle-hole excitations relative to the reference:
/// singles ascending in (i, a), then doubles lexicographic in (i, j, a, b).
std::vector<Excitation> particle_hole_excitations(int n_spatial, int n_alpha,
                                                  int n_beta, bool singles,
                                                  bool doubles);

AnsatzCircuit build_uccsd(int n_spatial, int n_alpha, int n_beta,
                          Encoding enc = Encoding::jordan_wigner);
AnsatzCircuit build_uccd(int n_spatial, int n_alpha, int n_beta,
                         Encoding enc = Encoding::jordan_wigner);

/// Single Trotter step of one generator: rotations in ascending letter order.
std::vector<PauliRotation> trotterize(const ExcitationGenerator& g, int n_qubits,
                                      Encoding enc);

/// Singles and doubles with each excitation grouped with its spin-flipped
/// partner under a shared parameter.
OperatorPool build_fermionic_pool(int n_spatial, int n_alpha, int n_beta);

/// Pauli strings of the mapped particle-hole excitations with the Z letters
/// removed, deduplicated, in ascending letter order.
OperatorPool build_qubit_pool(int n_spatial, int n_alpha, int n_beta,
                              Encoding enc = Encoding::jordan_wigner);

/// Staircase model: a weight-w rotation costs 2(w-1) CNOTs. Reference-state
/// preparation is not counted.
long count_cnots(const AnsatzCircuit& c);
int rotation_cnots(const PauliString& p);

nlohmann::json circuit_summary(const AnsatzCircuit& c);

const char* to_string(PoolFlavor f);

}  // namespace vqeac
