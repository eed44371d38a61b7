// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/pauli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vqeac/errors.hpp"

namespace vqeac {

namespace {

int letter_code(const PauliString& s, int k) {
  const bool xb = (s.x >> k) & 1u, zb = (s.z >> k) & 1u;
  return xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
}

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

PauliString PauliString::from_letters(const std::string& letters) {
  if (int(letters.size()) > 64) throw DomainError("Pauli string longer than 64");
  PauliString s{int(letters.size()), 0, 0};
  for (int k = 0; k < s.n; ++k) {
    const std::uint64_t bit = std::uint64_t(1) << k;
    switch (letters[k]) {
      case 'I': break;
      case 'X': s.x |= bit; break;
      case 'Y': s.x |= bit; s.z |= bit; break;
      case 'Z': s.z |= bit; break;
      default: throw DomainError(std::string("bad Pauli letter '") + letters[k] + "'");
    }
  }
  return s;
}

std::string PauliString::letters() const {
  std::string out(n, 'I');
  for (int k = 0; k < n; ++k) out[k] = letter(k);
  return out;
}

char PauliString::letter(int k) const { return "IXYZ"[letter_code(*this, k)]; }
int PauliString::weight() const { return std::popcount(x | z); }
int PauliString::y_count() const { return std::popcount(x & z); }

bool operator<(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) return a.n < b.n;
  const std::uint64_t d = (a.x ^ b.x) | (a.z ^ b.z);
  if (d == 0) return false;
  const int k = std::countr_zero(d);
  return letter_code(a, k) < letter_code(b, k);
}

cplx pauli_product_phase(const PauliString& a, const PauliString& b) {
  const std::uint64_t xc = a.x ^ b.x, zc = a.z ^ b.z;
  const int ya = std::popcount(a.x & a.z), yb = std::popcount(b.x & b.z),
            yc = std::popcount(xc & zc);
  const int sign = std::popcount(a.z & b.x) & 1;
  return i_pow(ya + yb - yc + 2 * sign);
}

PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.string.n != b.string.n)
    throw DomainError("Pauli strings of different length");
  PauliTerm out;
  out.string = {a.string.n, a.string.x ^ b.string.x, a.string.z ^ b.string.z};
  out.coeff = a.coeff * b.coeff * pauli_product_phase(a.string, b.string);
  return out;
}

PauliSum PauliSum::identity(int n, cplx c) {
  PauliSum s(n);
  s.add(PauliString::identity(n), c);
  return s;
}

PauliSum PauliSum::single(const PauliString& str, cplx c) {
  PauliSum s(str.n);
  s.add(str, c);
  return s;
}

void PauliSum::add(const PauliString& s, cplx c) {
  if (s.n != n_) throw DomainError("Pauli string length differs from sum");
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) it->second += c;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (empty() && n_ == 0) n_ = o.n_;
  for (const auto& [s, c] : o.terms_) add(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& o) {
  if (empty() && n_ == 0) n_ = o.n_;
  for (const auto& [s, c] : o.terms_) add(s, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(cplx c) {
  for (auto& [s, v] : terms_) v *= c;
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw DomainError("Pauli sums of different width");
  PauliSum out(a.n_);
  for (const auto& [sa, ca] : a.terms_)
    for (const auto& [sb, cb] : b.terms_) {
      PauliString s{a.n_, sa.x ^ sb.x, sa.z ^ sb.z};
      out.add(s, ca * cb * pauli_product_phase(sa, sb));
    }
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_);
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
  return out;
}

PauliSum& PauliSum::prune(double threshold) {
  std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) < threshold; });
  return *this;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

double PauliSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

cplx PauliSum::coeff(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx{} : it->second;
}

CMat PauliSum::to_dense() const {
  if (n_ > 14) throw SizeError("dense Pauli matrix limited to 14 qubits");
  const std::size_t dim = std::size_t(1) << n_;
  CMat m = CMat::Zero(dim, dim);
  for (const auto& [s, c] : terms_) {
    const cplx base = c * i_pow(s.y_count());
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & s.z) & 1) ? -1.0 : 1.0;
      m(b ^ s.x, b) += base * sign;
    }
  }
  return m;
}

void PauliSum::dump(std::ostream& os) const {
  char buf[64];
  for (const auto& [s, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%+.9f", c.real());
    os << buf;
    if (c.imag() != 0.0) {
      std::snprintf(buf, sizeof buf, "%+.9fj", c.imag());
      os << buf;
    }
    os << ' ' << s.letters() << '\n';
  }
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  PauliSum out = a * b - b * a;
  return out.prune();
}

}  // namespace vqeac
