// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <set>

#include "vqeac/errors.hpp"
#include "vqeac/kernels.hpp"

namespace vqeac {

void check_qubit_count(int n) {
  if (n < 0) throw DomainError("negative qubit count");
  if (n > kMaxQubits) {
    const double gib = std::ldexp(16.0, n) / (1024.0 * 1024.0 * 1024.0);
    throw SizeError(std::to_string(n) + " qubits exceed the limit of " +
                    std::to_string(kMaxQubits) + " (statevector would need " +
                    std::to_string(gib) + " GiB)");
  }
}

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
  check_qubit_count(n_qubits);
  amps_ = CVec::Zero(std::size_t(1) << n_qubits);
  amps_(0) = 1.0;
}

Statevector::Statevector(int n_qubits, CVec amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (std::size_t(amps_.size()) != (std::size_t(1) << n_qubits))
    throw DomainError("amplitude count does not match qubit count");
}

Statevector prepare_reference(const std::vector<int>& occupied, int n_qubits,
                              Encoding enc) {
  std::uint64_t occ = 0;
  for (int p : occupied) {
    if (p < 0 || p >= n_qubits) throw DomainError("occupied index out of range");
    const std::uint64_t bit = std::uint64_t(1) << p;
    if (occ & bit) throw DomainError("duplicate occupied index " + std::to_string(p));
    occ |= bit;
  }
  Statevector sv(n_qubits);
  sv.amplitudes()(0) = 0.0;
  sv.amplitudes()(encode_occupation(occ, enc) & (sv.dim() - 1)) = 1.0;
  return sv;
}

void apply_pauli_rotation(Statevector& state, const PauliString& p, double theta) {
  if (p.n != state.n_qubits()) throw DomainError("Pauli string length mismatch");
  kernels::omp::pauli_rotation(state.amplitudes().data(), state.dim(), p.x, p.z,
                               p.y_count(), theta);
}

CVec apply_pauli_sum(const Statevector& state, const PauliSum& h) {
  if (h.n_qubits() != state.n_qubits()) throw DomainError("PauliSum length mismatch");
  const CVec& a = state.amplitudes();
  CVec out = CVec::Zero(a.size());
  const std::int64_t dim = std::int64_t(a.size());
  for (const auto& [s, c] : h.terms()) {
    const cplx iny = kernels::i_power(s.y_count()) * c;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < dim; ++b) {
      const double sg = (std::popcount(std::uint64_t(b) & s.z) & 1) ? -1.0 : 1.0;
      out(b ^ std::int64_t(s.x)) += iny * sg * a(b);
    }
  }
  return out;
}

double expectation(const Statevector& state, const PauliSum& h) {
  if (h.n_qubits() != state.n_qubits()) throw DomainError("PauliSum length mismatch");
  if (!h.is_hermitian()) throw DomainError("expectation of a non-hermitian PauliSum");
  cplx total = 0.0;
  for (const auto& [s, c] : h.terms())
    total += c * kernels::omp::pauli_expectation(state.amplitudes().data(), state.dim(),
                                                 s.x, s.z, s.y_count());
  if (std::abs(total.imag()) > 1e-10)
    throw NumericalError("imaginary expectation residual " + std::to_string(total.imag()));
  return total.real();
}

void apply_exact_antihermitian(Statevector& state, const FermionOperator& g,
                               Encoding enc) {
  if (state.n_qubits() > 16) throw SizeError("exact exponential limited to 16 qubits");
  if (!g.is_antihermitian()) throw DomainError("generator is not antihermitian");
  if (g.empty()) return;
  const PauliSum G = map_fermion(g, state.n_qubits(), enc);
  double bound = 0.0;
  for (const auto& [s, c] : G.terms()) bound += std::abs(c);
  const int steps = std::max(1, int(std::ceil(bound / 0.5)));
  const double scale = 1.0 / steps;
  for (int step = 0; step < steps; ++step) {
    CVec acc = state.amplitudes();
    Statevector term = state;
    for (int k = 1; k < 60; ++k) {
      CVec next = apply_pauli_sum(term, G) * (scale / k);
      term.amplitudes() = std::move(next);
      acc += term.amplitudes();
      if (term.amplitudes().norm() < 1e-17) break;
    }
    state.amplitudes() = std::move(acc);
  }
}

void dump_binary(const Statevector& state, std::ostream& os) {
  static_assert(std::endian::native == std::endian::little,
                "binary dump assumes a little-endian host");
  for (const cplx& a : state.amplitudes()) {
    const double re = a.real(), im = a.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

}  // namespace vqeac
