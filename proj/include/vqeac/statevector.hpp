// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file statevector.hpp
 * @brief 2^n-amplitude register with Pauli-rotation and expectation kernels.
 *
 * Basis index bit k is qubit k (qubit 0 least significant).
 */

#pragma once

#include <iosfwd>
#include <vector>

#include "vqeac/fermion.hpp"
#include "vqeac/pauli.hpp"

namespace vqeac {

class Statevector {
 public:
  /// |0...0> on n qubits. Throws SizeError above kMaxQubits.
  explicit Statevector(int n_qubits);
  Statevector(int n_qubits, CVec amplitudes);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t(amps_.size()); }
  const CVec& amplitudes() const noexcept { return amps_; }
  CVec& amplitudes() noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

 private:
  int n_;
  CVec amps_;
};

/// Throws SizeError with a memory estimate when n exceeds kMaxQubits.
void check_qubit_count(int n_qubits);

/// Basis state of an occupation set; under the parity encoding the index is
/// the prefix-parity image of the occupation string.
Statevector prepare_reference(const std::vector<int>& occupied, int n_qubits,
                              Encoding enc = Encoding::jordan_wigner);

/// state <- exp(-i theta P / 2) state.
void apply_pauli_rotation(Statevector& state, const PauliString& p, double theta);

/// H|psi> for an arbitrary PauliSum.
CVec apply_pauli_sum(const Statevector& state, const PauliSum& h);

/// <psi|H|psi>; DomainError unless H is hermitian.
double expectation(const Statevector& state, const PauliSum& h);

/// state <- exp(G) state for an antihermitian fermionic G (n <= 16 qubits),
/// by a scaled Taylor series on the mapped operator.
void apply_exact_antihermitian(Statevector& state, const FermionOperator& g,
                               Encoding enc = Encoding::jordan_wigner);

/// Little-endian interleaved (re, im) doubles.
void dump_binary(const Statevector& state, std::ostream& os);

}  // namespace vqeac
