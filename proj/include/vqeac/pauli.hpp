// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pauli.hpp
 * @brief Pauli strings and weighted sums of Pauli strings.
 *
 * A string is stored as an X mask and a Z mask (Y = both bits set), qubit k
 * at bit k. The textual form puts qubit 0 first: "XIZY" acts with X on
 * qubit 0 and Y on qubit 3.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vqeac/linalg.hpp"

namespace vqeac {

constexpr int kMaxQubits = 24;
constexpr double kPruneThreshold = 1e-12;

struct PauliString {
  int n = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString identity(int n) { return {n, 0, 0}; }
  /// Parses "IXYZ..." (qubit 0 first).
  static PauliString from_letters(const std::string& letters);
  std::string letters() const;
  int weight() const;
  int y_count() const;
  char letter(int qubit) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Lexicographic on the letter string (I < X < Y < Z, qubit 0 first).
  friend bool operator<(const PauliString& a, const PauliString& b);
};

struct PauliTerm {
  cplx coeff{1.0, 0.0};
  PauliString string;
};

/// Product a*b with the accumulated phase; throws DomainError on length
/// mismatch.
PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b);

/// Phase i^k of P_a P_b without coefficients.
cplx pauli_product_phase(const PauliString& a, const PauliString& b);

class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n) : n_(n) {}
  static PauliSum identity(int n, cplx c = 1.0);
  static PauliSum single(const PauliString& s, cplx c = 1.0);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::map<PauliString, cplx>& terms() const noexcept { return terms_; }

  void add(const PauliString& s, cplx c);
  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator-=(const PauliSum& o);
  PauliSum& operator*=(cplx c);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  PauliSum adjoint() const;
  /// Drops terms with |c| < threshold.
  PauliSum& prune(double threshold = kPruneThreshold);
  /// Every coefficient real within `tol`.
  bool is_hermitian(double tol = 1e-12) const;
  /// Largest |c| over the terms; 0 for an empty sum.
  double max_abs_coeff() const;
  cplx coeff(const PauliString& s) const;

  /// Dense 2^n matrix in the computational basis (qubit 0 least significant).
  CMat to_dense() const;

  /// One term per line: "+c.ccccccccc LETTERS" (imaginary part appended
  /// as "+c.cccccccccj" when nonzero).
  void dump(std::ostream& os) const;

 private:
  int n_ = 0;
  std::map<PauliString, cplx> terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace vqeac
