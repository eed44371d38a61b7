// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/kernels.hpp"

#include <bit>
#include <cmath>

namespace vqeac::kernels {

namespace {

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

// P|b> = i^ny (-1)^{|b & z|} |b ^ x>
inline cplx phase_of(std::uint64_t b, std::uint64_t z, cplx iny) {
  return iny * parity_sign(b & z);
}

std::size_t n_blocks(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace

namespace serial {

void pauli_rotation(cplx* amp, std::size_t dim, std::uint64_t x, std::uint64_t z,
                    int ny, double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const cplx iny = i_power(ny);
  const cplx mis(0.0, -s);
  if (x == 0) {
    for (std::size_t b = 0; b < dim; ++b) amp[b] *= c + mis * phase_of(b, z, iny);
    return;
  }
  for (std::size_t b = 0; b < dim; ++b) {
    const std::size_t f = b ^ x;
    if (f < b) continue;
    const cplx ab = amp[b], af = amp[f];
    // (P psi)[f] = phase(b) psi[b], (P psi)[b] = phase(f) psi[f]
    amp[b] = c * ab + mis * phase_of(f, z, iny) * af;
    amp[f] = c * af + mis * phase_of(b, z, iny) * ab;
  }
}

cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t x,
                       std::uint64_t z, int ny) {
  const cplx iny = i_power(ny);
  cplx total = 0.0;
  for (std::size_t blk = 0; blk < n_blocks(dim); ++blk) {
    cplx part = 0.0;
    const std::size_t end = std::min(dim, (blk + 1) * kReductionBlock);
    for (std::size_t b = blk * kReductionBlock; b < end; ++b)
      part += std::conj(amp[b ^ x]) * phase_of(b, z, iny) * amp[b];
    total += part;
  }
  return total;
}

void pair_rotation(double* v, const PairList& g, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double va = v[g.a[k]], vb = v[g.b[k]], ss = g.sign[k] * s;
    v[g.a[k]] = c * va - ss * vb;
    v[g.b[k]] = c * vb + ss * va;
  }
}

void pair_apply(const double* v, double* out, const PairList& g) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    out[g.b[k]] = g.sign[k] * v[g.a[k]];
    out[g.a[k]] = -g.sign[k] * v[g.b[k]];
  }
}

void csr_matvec(const Csr& m, const double* in, double* out) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      acc += m.val[k] * in[m.col[k]];
    out[r] = acc;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t blk = 0; blk < n_blocks(n); ++blk) {
    double part = 0.0;
    const std::size_t end = std::min(n, (blk + 1) * kReductionBlock);
    for (std::size_t i = blk * kReductionBlock; i < end; ++i) part += a[i] * b[i];
    total += part;
  }
  return total;
}

}  // namespace serial

namespace omp {

void pauli_rotation(cplx* amp, std::size_t dim, std::uint64_t x, std::uint64_t z,
                    int ny, double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const cplx iny = i_power(ny);
  const cplx mis(0.0, -s);
  const std::int64_t n = static_cast<std::int64_t>(dim);
  if (x == 0) {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < n; ++b) amp[b] *= c + mis * phase_of(b, z, iny);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < n; ++b) {
    const std::int64_t f = b ^ static_cast<std::int64_t>(x);
    if (f < b) continue;
    const cplx ab = amp[b], af = amp[f];
    amp[b] = c * ab + mis * phase_of(f, z, iny) * af;
    amp[f] = c * af + mis * phase_of(b, z, iny) * ab;
  }
}

cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t x,
                       std::uint64_t z, int ny) {
  const cplx iny = i_power(ny);
  const std::int64_t nb = static_cast<std::int64_t>(n_blocks(dim));
  std::vector<cplx> parts(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < nb; ++blk) {
    cplx part = 0.0;
    const std::size_t end = std::min(dim, std::size_t(blk + 1) * kReductionBlock);
    for (std::size_t b = std::size_t(blk) * kReductionBlock; b < end; ++b)
      part += std::conj(amp[b ^ x]) * phase_of(b, z, iny) * amp[b];
    parts[blk] = part;
  }
  cplx total = 0.0;
  for (const cplx& p : parts) total += p;
  return total;
}

void pair_rotation(double* v, const PairList& g, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  // Pairs of one generator touch disjoint indices.
#pragma omp parallel for schedule(static) if (n > 2048)
  for (std::int64_t k = 0; k < n; ++k) {
    const double va = v[g.a[k]], vb = v[g.b[k]], ss = g.sign[k] * s;
    v[g.a[k]] = c * va - ss * vb;
    v[g.b[k]] = c * vb + ss * va;
  }
}

void pair_apply(const double* v, double* out, const PairList& g) {
  const std::int64_t n = static_cast<std::int64_t>(g.size());
#pragma omp parallel for schedule(static) if (n > 2048)
  for (std::int64_t k = 0; k < n; ++k) {
    out[g.b[k]] = g.sign[k] * v[g.a[k]];
    out[g.a[k]] = -g.sign[k] * v[g.b[k]];
  }
}

void csr_matvec(const Csr& m, const double* in, double* out) {
  const std::int64_t rows = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      acc += m.val[k] * in[m.col[k]];
    out[r] = acc;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  const std::int64_t nb = static_cast<std::int64_t>(n_blocks(n));
  std::vector<double> parts(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < nb; ++blk) {
    double part = 0.0;
    const std::size_t end = std::min(n, std::size_t(blk + 1) * kReductionBlock);
    for (std::size_t i = std::size_t(blk) * kReductionBlock; i < end; ++i)
      part += a[i] * b[i];
    parts[blk] = part;
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace omp
}  // namespace vqeac::kernels
