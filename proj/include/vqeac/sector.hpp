// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file sector.hpp
 * @brief Real-amplitude simulation restricted to a set of Fock basis states.
 *
 * UCC circuits and Pauli rotations with an odd number of Y letters keep the
 * amplitudes real, and the molecular Hamiltonian is a real symmetric matrix
 * in the computational basis. Working on real vectors over the occupied
 * particle-number sector (or the whole Fock space) gives the same numbers as
 * the 2^n complex register at a fraction of the cost.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "vqeac/fermion.hpp"
#include "vqeac/kernels.hpp"
#include "vqeac/statevector.hpp"

namespace vqeac {

/// Ordered set of occupation strings with their qubit basis indices.
class FockBasis {
 public:
  /// Determinants with n_alpha even and n_beta odd spin orbitals occupied,
  /// ordered by occupation bit string.
  static FockBasis sector(int n_spatial, int n_alpha, int n_beta, Encoding enc);
  /// Every occupation string on n_qubits modes.
  static FockBasis full(int n_qubits, Encoding enc);

  int n_qubits() const noexcept { return n_; }
  Encoding encoding() const noexcept { return enc_; }
  std::size_t size() const noexcept { return occ_.size(); }
  std::uint64_t occupation(std::size_t k) const { return occ_[k]; }
  std::uint64_t qubit_index(std::size_t k) const { return idx_[k]; }
  /// Position of an occupation string, or -1.
  std::int64_t find(std::uint64_t occupation) const;

  /// Embed a real sector vector into a 2^n register.
  Statevector expand(const Vec& v) const;
  /// Restrict a register to the basis; throws DomainError if weight outside
  /// the basis exceeds tol or any amplitude has an imaginary part above tol.
  Vec compress(const Statevector& sv, double tol = 1e-10) const;

 private:
  int n_ = 0;
  Encoding enc_ = Encoding::jordan_wigner;
  std::vector<std::uint64_t> occ_;
  std::vector<std::uint64_t> idx_;
  std::vector<std::int32_t> lookup_;  // occupation -> position
};

/// Fermionic sign and result of applying a^dag_p (dagger) or a_p to an
/// occupation string; returns false if the result vanishes.
bool apply_ladder(std::uint64_t& occ, int mode, bool dagger, double& sign);

/// Real symmetric Hamiltonian matrix (e_core on the diagonal) over a basis.
Csr build_sparse_hamiltonian(const EmbeddedHamiltonian& emb, const FockBasis& basis);

/// Rotation pairs of T - T^dag for a ladder string T (leftmost operator
/// first). Throws DomainError if the generator leaves the basis.
PairList excitation_pairs(const std::vector<Ladder>& t, const FockBasis& basis);

/// Rotation pairs of i*P for a Pauli string with an odd Y count.
PairList pauli_pairs(const PauliString& p, const FockBasis& basis);

}  // namespace vqeac
