// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP forms.
// Usage: bench_kernels [--qubits N] [--reps R] [--fixture path.fcidump]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "vqeac/integrals.hpp"
#include "vqeac/kernels.hpp"
#include "vqeac/sector.hpp"

using namespace vqeac;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void report(const char* name, double ts, double to, bool same) {
  std::printf("%-20s %12.3e %12.3e %8.2f  %s\n", name, ts, to, ts / to,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n_qubits = 20, reps = 20;
  std::string fixture = std::string(VQEAC_FIXTURE_DIR) + "/n2_sto3g_1.1.fcidump";
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--qubits")) n_qubits = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--reps")) reps = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--fixture")) fixture = argv[i + 1];
  }
  const std::size_t dim = std::size_t(1) << n_qubits;
  std::printf("threads %d, %d qubits, %d reps\n", omp_get_max_threads(), n_qubits, reps);
  std::printf("%-20s %12s %12s %8s\n", "kernel", "serial/s", "omp/s", "speedup");

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> amp(dim);
  for (auto& a : amp) a = {g(rng), g(rng)};
  const std::uint64_t x = 0b1011ull << (n_qubits / 2), z = 0b0110'0101ull;
  const int ny = __builtin_popcountll(x & z);

  {
    auto a = amp, b = amp;
    const double ts = seconds([&] { kernels::serial::pauli_rotation(a.data(), dim, x, z, ny, 0.3); }, reps);
    const double to = seconds([&] { kernels::omp::pauli_rotation(b.data(), dim, x, z, ny, 0.3); }, reps);
    report("pauli_rotation", ts, to, a == b);
  }
  {
    cplx es, eo;
    const double ts = seconds([&] { es = kernels::serial::pauli_expectation(amp.data(), dim, x, z, ny); }, reps);
    const double to = seconds([&] { eo = kernels::omp::pauli_expectation(amp.data(), dim, x, z, ny); }, reps);
    report("pauli_expectation", ts, to, es == eo);
  }

  std::vector<double> v(dim), w(dim);
  for (auto& e : v) e = g(rng);
  for (auto& e : w) e = g(rng);
  {
    double ds = 0, dd = 0;
    const double ts = seconds([&] { ds = kernels::serial::dot(v.data(), w.data(), dim); }, reps);
    const double to = seconds([&] { dd = kernels::omp::dot(v.data(), w.data(), dim); }, reps);
    report("dot", ts, to, ds == dd);
  }
  {
    std::vector<std::uint32_t> perm(dim);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    PairList pl;
    for (std::size_t k = 0; k + 1 < dim / 4; k += 2) {
      pl.a.push_back(perm[k]);
      pl.b.push_back(perm[k + 1]);
      pl.sign.push_back(k % 4 ? 1.0 : -1.0);
    }
    auto a = v, b = v;
    const double ts = seconds([&] { kernels::serial::pair_rotation(a.data(), pl, 0.2); }, reps);
    const double to = seconds([&] { kernels::omp::pair_rotation(b.data(), pl, 0.2); }, reps);
    report("pair_rotation", ts, to, a == b);
    std::vector<double> os(dim, 0.0), oo(dim, 0.0);
    const double ts2 = seconds([&] { kernels::serial::pair_apply(v.data(), os.data(), pl); }, reps);
    const double to2 = seconds([&] { kernels::omp::pair_apply(v.data(), oo.data(), pl); }, reps);
    report("pair_apply", ts2, to2, os == oo);
  }
  {
    const IntegralSet ints = load_fcidump(fixture);
    const ActiveSpace cas = ActiveSpace::full(ints);
    const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
    const FockBasis basis = FockBasis::sector(emb.n_act, emb.n_alpha, emb.n_beta, Encoding::parity);
    const Csr h = build_sparse_hamiltonian(emb, basis);
    std::vector<double> in(h.rows), os(h.rows), oo(h.rows);
    for (auto& e : in) e = g(rng);
    const double ts = seconds([&] { kernels::serial::csr_matvec(h, in.data(), os.data()); }, reps);
    const double to = seconds([&] { kernels::omp::csr_matvec(h, in.data(), oo.data()); }, reps);
    std::printf("(sector Hamiltonian: %zu rows, %zu nonzeros)\n", h.rows, h.nnz());
    report("csr_matvec", ts, to, os == oo);
  }
  return 0;
}
