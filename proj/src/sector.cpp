// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/sector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "vqeac/errors.hpp"

namespace vqeac {

namespace {

std::vector<std::uint64_t> combinations(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k < 0 || k > n) return out;
  if (k == 0) return {0};
  std::uint64_t v = (std::uint64_t(1) << k) - 1;
  const std::uint64_t limit = std::uint64_t(1) << n;
  while (v < limit) {
    out.push_back(v);
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

// Interleave alpha string (spatial bits) into even spin orbitals and beta
// into odd ones.
std::uint64_t interleave(std::uint64_t a, std::uint64_t b, int n) {
  std::uint64_t out = 0;
  for (int p = 0; p < n; ++p) {
    if (a >> p & 1) out |= std::uint64_t(1) << (2 * p);
    if (b >> p & 1) out |= std::uint64_t(1) << (2 * p + 1);
  }
  return out;
}

}  // namespace

FockBasis FockBasis::sector(int n_spatial, int n_alpha, int n_beta, Encoding enc) {
  FockBasis fb;
  fb.n_ = 2 * n_spatial;
  check_qubit_count(fb.n_);
  fb.enc_ = enc;
  const auto as = combinations(n_spatial, n_alpha);
  const auto bs = combinations(n_spatial, n_beta);
  for (auto a : as)
    for (auto b : bs) fb.occ_.push_back(interleave(a, b, n_spatial));
  std::sort(fb.occ_.begin(), fb.occ_.end());
  fb.lookup_.assign(std::size_t(1) << fb.n_, -1);
  for (std::size_t k = 0; k < fb.occ_.size(); ++k) {
    fb.idx_.push_back(encode_occupation(fb.occ_[k], enc) &
                      ((std::uint64_t(1) << fb.n_) - 1));
    fb.lookup_[fb.occ_[k]] = std::int32_t(k);
  }
  return fb;
}

FockBasis FockBasis::full(int n_qubits, Encoding enc) {
  check_qubit_count(n_qubits);
  FockBasis fb;
  fb.n_ = n_qubits;
  fb.enc_ = enc;
  const std::size_t dim = std::size_t(1) << n_qubits;
  fb.occ_.resize(dim);
  fb.idx_.resize(dim);
  fb.lookup_.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    fb.occ_[k] = k;
    fb.idx_[k] = encode_occupation(k, enc) & (dim - 1);
    fb.lookup_[k] = std::int32_t(k);
  }
  return fb;
}

std::int64_t FockBasis::find(std::uint64_t occupation) const {
  if (occupation >= lookup_.size()) return -1;
  return lookup_[occupation];
}

Statevector FockBasis::expand(const Vec& v) const {
  if (std::size_t(v.size()) != size()) throw DomainError("vector size mismatch");
  Statevector sv(n_);
  sv.amplitudes()(0) = 0.0;
  for (std::size_t k = 0; k < size(); ++k) sv.amplitudes()(idx_[k]) = v(k);
  return sv;
}

Vec FockBasis::compress(const Statevector& sv, double tol) const {
  if (sv.n_qubits() != n_) throw DomainError("qubit count mismatch");
  Vec v(size());
  double inside = 0.0, imag = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    const cplx a = sv.amplitudes()(idx_[k]);
    v(k) = a.real();
    inside += std::norm(a);
    imag = std::max(imag, std::abs(a.imag()));
  }
  const double outside = sv.amplitudes().squaredNorm() - inside;
  if (outside > tol || imag > tol)
    throw DomainError("state is not a real vector over the basis");
  return v;
}

bool apply_ladder(std::uint64_t& occ, int mode, bool dagger, double& sign) {
  const std::uint64_t bit = std::uint64_t(1) << mode;
  if (bool(occ & bit) == dagger) return false;
  if (std::popcount(occ & (bit - 1)) & 1) sign = -sign;
  occ ^= bit;
  return true;
}

Csr build_sparse_hamiltonian(const EmbeddedHamiltonian& emb, const FockBasis& basis) {
  const int n = emb.n_act;
  const int ns = 2 * n;
  if (basis.n_qubits() != ns) throw DomainError("basis does not match the Hamiltonian");
  // Spin-orbital integrals: h and antisymmetrized <pq||rs>.
  auto spat = [](int p) { return p >> 1; };
  auto spin = [](int p) { return p & 1; };
  Mat h = Mat::Zero(ns, ns);
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      if (spin(p) == spin(q)) h(p, q) = emb.h_eff(spat(p), spat(q));
  auto phys = [&](int p, int q, int r, int s) {
    if (spin(p) != spin(r) || spin(q) != spin(s)) return 0.0;
    return emb.v_act(spat(p), spat(r), spat(q), spat(s));
  };
  std::vector<double> anti(std::size_t(ns) * ns * ns * ns);
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      for (int r = 0; r < ns; ++r)
        for (int s = 0; s < ns; ++s)
          anti[((std::size_t(p) * ns + q) * ns + r) * ns + s] =
              phys(p, q, r, s) - phys(p, q, s, r);

  Csr m;
  m.rows = basis.size();
  m.row_ptr.assign(m.rows + 1, 0);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(m.rows);
  const std::int64_t nrows = std::int64_t(m.rows);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < nrows; ++k) {
    const std::uint64_t x = basis.occupation(k);
    std::map<std::uint32_t, double> acc;
    acc[std::uint32_t(k)] += emb.e_core;
    for (int r = 0; r < ns; ++r) {
      if (!(x >> r & 1)) continue;
      for (int p = 0; p < ns; ++p) {
        if (h(p, r) == 0.0) continue;
        std::uint64_t y = x;
        double sg = 1.0;
        apply_ladder(y, r, false, sg);
        if (!apply_ladder(y, p, true, sg)) continue;
        const std::int64_t c = basis.find(y);
        if (c >= 0) acc[std::uint32_t(c)] += sg * h(p, r);
      }
    }
    for (int r = 0; r < ns; ++r) {
      if (!(x >> r & 1)) continue;
      for (int s = r + 1; s < ns; ++s) {
        if (!(x >> s & 1)) continue;
        std::uint64_t y0 = x;
        double s0 = 1.0;
        apply_ladder(y0, r, false, s0);
        apply_ladder(y0, s, false, s0);
        for (int q = 0; q < ns; ++q) {
          if (y0 >> q & 1) continue;
          for (int p = 0; p < q; ++p) {
            if (y0 >> p & 1) continue;
            const double g = anti[((std::size_t(p) * ns + q) * ns + r) * ns + s];
            if (g == 0.0) continue;
            // a^dag_p a^dag_q a_s a_r
            std::uint64_t y = y0;
            double sg = s0;
            apply_ladder(y, q, true, sg);
            apply_ladder(y, p, true, sg);
            const std::int64_t c = basis.find(y);
            if (c >= 0) acc[std::uint32_t(c)] += sg * g;
          }
        }
      }
    }
    auto& row = rows[k];
    row.reserve(acc.size());
    for (const auto& [c, v] : acc)
      if (v != 0.0) row.emplace_back(c, v);
  }
  for (std::size_t k = 0; k < m.rows; ++k) m.row_ptr[k + 1] = m.row_ptr[k] + rows[k].size();
  m.col.reserve(m.row_ptr.back());
  m.val.reserve(m.row_ptr.back());
  for (const auto& row : rows)
    for (const auto& [c, v] : row) {
      m.col.push_back(c);
      m.val.push_back(v);
    }
  return m;
}

PairList excitation_pairs(const std::vector<Ladder>& t, const FockBasis& basis) {
  PairList out;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    std::uint64_t y = basis.occupation(k);
    double sg = 1.0;
    bool ok = true;
    for (auto it = t.rbegin(); ok && it != t.rend(); ++it)
      ok = apply_ladder(y, it->mode, it->dagger, sg);
    if (!ok) continue;
    if (y == basis.occupation(k)) continue;  // number-operator-like terms
    const std::int64_t c = basis.find(y);
    if (c < 0) throw DomainError("excitation leaves the simulation basis");
    out.a.push_back(std::uint32_t(k));
    out.b.push_back(std::uint32_t(c));
    out.sign.push_back(sg);
  }
  return out;
}

PairList pauli_pairs(const PauliString& p, const FockBasis& basis) {
  if (p.n != basis.n_qubits()) throw DomainError("Pauli string length mismatch");
  if (p.y_count() % 2 == 0) throw DomainError("pool string must have an odd Y count");
  if (p.x == 0) throw DomainError("diagonal string has no rotation pairs");
  PairList out;
  const cplx iny = kernels::i_power(p.y_count() + 1);  // i * i^ny, real
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::uint64_t e = basis.qubit_index(k);
    const std::uint64_t f = e ^ p.x;
    if (f < e) continue;
    const std::int64_t c = basis.find(decode_occupation(f, basis.encoding()) &
                                      ((std::uint64_t(1) << basis.n_qubits()) - 1));
    if (c < 0) throw DomainError("Pauli rotation leaves the simulation basis");
    const double sg = ((std::popcount(e & p.z) & 1) ? -1.0 : 1.0) * iny.real();
    out.a.push_back(std::uint32_t(k));
    out.b.push_back(std::uint32_t(c));
    out.sign.push_back(sg);
  }
  return out;
}

}  // namespace vqeac
