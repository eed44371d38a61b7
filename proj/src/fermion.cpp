// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/fermion.hpp"

#include <algorithm>
#include <cmath>

#include "vqeac/errors.hpp"

namespace vqeac {

FermionOperator FermionOperator::identity(cplx c) {
  FermionOperator op;
  op.add_term(c, {});
  return op;
}

FermionOperator FermionOperator::one_body(int p, int q, cplx c) {
  FermionOperator op;
  op.add_term(c, {{p, true}, {q, false}});
  return op;
}

FermionOperator FermionOperator::two_body(int p, int q, int s, int r, cplx c) {
  FermionOperator op;
  op.add_term(c, {{p, true}, {q, true}, {s, false}, {r, false}});
  return op;
}

void FermionOperator::add_term(cplx c, std::vector<Ladder> ops) {
  terms_.push_back({c, std::move(ops)});
}

int FermionOperator::max_mode() const {
  int m = -1;
  for (const auto& t : terms_)
    for (const auto& l : t.ops) m = std::max(m, l.mode);
  return m;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

FermionOperator& FermionOperator::operator-=(const FermionOperator& o) {
  for (const auto& t : o.terms_) terms_.push_back({-t.coeff, t.ops});
  return *this;
}

FermionOperator& FermionOperator::operator*=(cplx c) {
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
  FermionOperator out;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      std::vector<Ladder> ops = ta.ops;
      ops.insert(ops.end(), tb.ops.begin(), tb.ops.end());
      out.terms_.push_back({ta.coeff * tb.coeff, std::move(ops)});
    }
  return out;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out;
  for (const auto& t : terms_) {
    std::vector<Ladder> ops(t.ops.rbegin(), t.ops.rend());
    for (auto& l : ops) l.dagger = !l.dagger;
    out.terms_.push_back({std::conj(t.coeff), std::move(ops)});
  }
  return out;
}

namespace {

// Rank used for the canonical order: creators (descending mode) precede
// annihilators (descending mode).
bool in_order(const Ladder& left, const Ladder& right) {
  if (left.dagger != right.dagger) return left.dagger;
  return left.mode > right.mode;
}

}  // namespace

FermionOperator FermionOperator::normal_ordered() const {
  std::map<std::vector<Ladder>, cplx> acc;
  std::vector<FermionTerm> work = terms_;
  while (!work.empty()) {
    FermionTerm t = std::move(work.back());
    work.pop_back();
    bool zero = false, done = false;
    // Bubble sort with anticommutation; contractions spawn new work items.
    while (!done && !zero) {
      done = true;
      for (std::size_t k = 0; k + 1 < t.ops.size(); ++k) {
        Ladder& l = t.ops[k];
        Ladder& r = t.ops[k + 1];
        if (l.mode == r.mode && l.dagger == r.dagger) {
          zero = true;
          break;
        }
        if (in_order(l, r)) continue;
        if (!l.dagger && r.dagger && l.mode == r.mode) {
          FermionTerm contracted;
          contracted.coeff = t.coeff;
          contracted.ops.reserve(t.ops.size() - 2);
          for (std::size_t m = 0; m < t.ops.size(); ++m)
            if (m != k && m != k + 1) contracted.ops.push_back(t.ops[m]);
          work.push_back(std::move(contracted));
        }
        std::swap(l, r);
        t.coeff = -t.coeff;
        done = false;
      }
    }
    if (!zero) acc[t.ops] += t.coeff;
  }
  FermionOperator out;
  for (auto& [ops, c] : acc)
    if (std::abs(c) >= kPruneThreshold) out.terms_.push_back({c, ops});
  return out;
}

bool FermionOperator::is_hermitian(double tol) const {
  const FermionOperator diff = (*this - adjoint()).normal_ordered();
  for (const auto& t : diff.terms_)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

bool FermionOperator::is_antihermitian(double tol) const {
  const FermionOperator sum = (*this + adjoint()).normal_ordered();
  for (const auto& t : sum.terms_)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

FermionOperator anticommutator(const FermionOperator& a, const FermionOperator& b) {
  return (a * b + b * a).normal_ordered();
}

FermionOperator commutator(const FermionOperator& a, const FermionOperator& b) {
  return (a * b - b * a).normal_ordered();
}

FermionOperator hamiltonian_to_fermion(const EmbeddedHamiltonian& emb) {
  FermionOperator op = FermionOperator::identity(emb.e_core);
  const int n = emb.n_act;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double h = emb.h_eff(p, q);
      if (h == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        op.add_term(h, {{spin_orbital(p, s), true}, {spin_orbital(q, s), false}});
    }
  // 1/2 sum <pq|rs> a+_p a+_q a_s a_r with <pq|rs> = (pr|qs), spin-diagonal.
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double g = emb.v_act(p, r, q, s);
          if (g == 0.0) continue;
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb) {
              const int P = spin_orbital(p, sa), Q = spin_orbital(q, sb),
                        R = spin_orbital(r, sa), S = spin_orbital(s, sb);
              if (P == Q || R == S) continue;
              op.add_term(0.5 * g, {{P, true}, {Q, true}, {S, false}, {R, false}});
            }
        }
  return op;
}

namespace {

// Qubit image of a single ladder operator.
PauliSum ladder_image(const Ladder& l, int n, Encoding enc) {
  const int p = l.mode;
  const std::uint64_t bit = std::uint64_t(1) << p;
  PauliString c{n, 0, 0}, d{n, 0, 0};
  if (enc == Encoding::jordan_wigner) {
    const std::uint64_t chain = bit - 1;
    c = {n, bit, chain};        // X_p Z_{<p}
    d = {n, bit, chain | bit};  // Y_p Z_{<p}
  } else {
    const std::uint64_t all = (n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
    const std::uint64_t update = all & ~((bit << 1) - 1);  // qubits > p
    const std::uint64_t par = p > 0 ? (bit >> 1) : 0;      // qubit p-1
    c = {n, update | bit, par};  // X_{>p} X_p Z_{p-1}
    d = {n, update | bit, bit};  // X_{>p} Y_p
  }
  PauliSum out(n);
  // a^dag = (c - i d)/2, a = (c + i d)/2
  out.add(c, 0.5);
  out.add(d, l.dagger ? cplx(0, -0.5) : cplx(0, 0.5));
  return out;
}

}  // namespace

PauliSum map_fermion(const FermionOperator& op, int n_qubits, Encoding enc) {
  if (n_qubits <= 0 || n_qubits > 64) throw DomainError("qubit count out of range");
  if (op.max_mode() >= n_qubits)
    throw DomainError("fermionic mode index exceeds qubit count");
  std::vector<PauliSum> cache_create(n_qubits), cache_annih(n_qubits);
  for (int p = 0; p < n_qubits; ++p) {
    cache_create[p] = ladder_image({p, true}, n_qubits, enc);
    cache_annih[p] = ladder_image({p, false}, n_qubits, enc);
  }
  PauliSum out(n_qubits);
  for (const auto& t : op.terms()) {
    PauliSum prod = PauliSum::identity(n_qubits, t.coeff);
    for (const auto& l : t.ops)
      prod = prod * (l.dagger ? cache_create[l.mode] : cache_annih[l.mode]);
    out += prod;
  }
  return out.prune();
}

PauliSum jordan_wigner(const FermionOperator& op, int n_qubits) {
  return map_fermion(op, n_qubits, Encoding::jordan_wigner);
}

PauliSum parity_map(const FermionOperator& op, int n_qubits) {
  return map_fermion(op, n_qubits, Encoding::parity);
}

std::uint64_t encode_occupation(std::uint64_t occ, Encoding enc) {
  if (enc == Encoding::jordan_wigner) return occ;
  // qubit j holds the parity of occupations 0..j (prefix XOR)
  std::uint64_t out = occ;
  for (int shift = 1; shift < 64; shift <<= 1) out ^= out << shift;
  return out;
}

std::uint64_t decode_occupation(std::uint64_t index, Encoding enc) {
  if (enc == Encoding::jordan_wigner) return index;
  return index ^ (index << 1);
}

const char* to_string(Encoding enc) {
  return enc == Encoding::jordan_wigner ? "jordan_wigner" : "parity";
}

}  // namespace vqeac
