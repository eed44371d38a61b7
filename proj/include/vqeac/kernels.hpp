// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file kernels.hpp
 * @brief Inner loops of the simulator, in a serial reference form and an
 * OpenMP form.
 *
 * Reductions in both forms sum fixed-size blocks in index order, so results
 * do not depend on the thread count and the two forms agree bit for bit.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "vqeac/linalg.hpp"

namespace vqeac {

/// Real rotation generator given by its nonzero 2x2 blocks: G|a> = s|b>,
/// G|b> = -s|a>.
struct PairList {
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  std::vector<double> sign;
  std::size_t size() const noexcept { return a.size(); }
};

/// Compressed sparse row matrix with real entries.
struct Csr {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::size_t nnz() const noexcept { return val.size(); }
};

namespace kernels {

constexpr std::size_t kReductionBlock = 4096;

namespace serial {
/// amp <- exp(-i theta P / 2) amp for P = i^ny X^x Z^z (as a bit pattern).
void pauli_rotation(cplx* amp, std::size_t dim, std::uint64_t x, std::uint64_t z,
                    int ny, double theta);
/// <amp|P|amp>.
cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t x,
                       std::uint64_t z, int ny);
/// v <- exp(theta G) v.
void pair_rotation(double* v, const PairList& g, double theta);
/// out <- G v (overwrites out on every paired index, leaves others untouched).
void pair_apply(const double* v, double* out, const PairList& g);
void csr_matvec(const Csr& m, const double* in, double* out);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace serial

namespace omp {
void pauli_rotation(cplx* amp, std::size_t dim, std::uint64_t x, std::uint64_t z,
                    int ny, double theta);
cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t x,
                       std::uint64_t z, int ny);
void pair_rotation(double* v, const PairList& g, double theta);
void pair_apply(const double* v, double* out, const PairList& g);
void csr_matvec(const Csr& m, const double* in, double* out);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace omp

/// i^k for integer k.
inline cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace kernels
}  // namespace vqeac
