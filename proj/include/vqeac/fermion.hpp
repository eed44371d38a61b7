// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fermion.hpp
 * @brief Second-quantized fermionic operators and fermion-to-qubit mappings.
 *
 * Spin orbitals are interleaved: spatial orbital p maps to 2p (alpha) and
 * 2p+1 (beta).
 */

#pragma once

#include <map>
#include <vector>

#include "vqeac/integrals.hpp"
#include "vqeac/pauli.hpp"

namespace vqeac {

inline int spin_orbital(int spatial, int spin) { return 2 * spatial + spin; }

struct Ladder {
  int mode = 0;
  bool dagger = false;
  friend auto operator<=>(const Ladder&, const Ladder&) = default;
};

struct FermionTerm {
  cplx coeff{1.0, 0.0};
  std::vector<Ladder> ops;  ///< leftmost operator first
};

class FermionOperator {
 public:
  FermionOperator() = default;
  static FermionOperator identity(cplx c = 1.0);
  /// c * a^dag_p a_q
  static FermionOperator one_body(int p, int q, cplx c = 1.0);
  /// c * a^dag_p a^dag_q a_s a_r
  static FermionOperator two_body(int p, int q, int s, int r, cplx c = 1.0);

  void add_term(cplx c, std::vector<Ladder> ops);
  const std::vector<FermionTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int max_mode() const;

  FermionOperator& operator+=(const FermionOperator& o);
  FermionOperator& operator-=(const FermionOperator& o);
  FermionOperator& operator*=(cplx c);
  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) { return a -= b; }
  friend FermionOperator operator*(FermionOperator a, cplx c) { return a *= c; }
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b);

  FermionOperator adjoint() const;
  /// Normal-ordered form: creators left of annihilators, each group in
  /// descending mode order; like terms merged and |c| < 1e-12 dropped.
  FermionOperator normal_ordered() const;
  bool is_hermitian(double tol = 1e-12) const;
  bool is_antihermitian(double tol = 1e-12) const;

 private:
  std::vector<FermionTerm> terms_;
};

FermionOperator anticommutator(const FermionOperator& a, const FermionOperator& b);
FermionOperator commutator(const FermionOperator& a, const FermionOperator& b);

/// Spin-orbital Hamiltonian of an embedded active space, identity term
/// carrying e_core. Physicists' <pq|rs> = (pr|qs).
FermionOperator hamiltonian_to_fermion(const EmbeddedHamiltonian& emb);

enum class Encoding { jordan_wigner, parity };

PauliSum jordan_wigner(const FermionOperator& op, int n_qubits);
PauliSum parity_map(const FermionOperator& op, int n_qubits);
PauliSum map_fermion(const FermionOperator& op, int n_qubits, Encoding enc);

/// Basis-state index of an occupation bit string under an encoding. The
/// parity image extends over all 64 bits; mask it to the register size.
std::uint64_t encode_occupation(std::uint64_t occupation, Encoding enc);
std::uint64_t decode_occupation(std::uint64_t index, Encoding enc);

const char* to_string(Encoding enc);

}  // namespace vqeac
