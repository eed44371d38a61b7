// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test executables.

#pragma once

#include <random>
#include <string>

#include "vqeac/fermion.hpp"
#include "vqeac/integrals.hpp"
#include "vqeac/linalg.hpp"

namespace vqeac::testing {

inline std::string fixture(const std::string& base) {
  return std::string(VQEAC_FIXTURE_DIR) + "/" + base + ".fcidump";
}

inline std::string fixture_meta(const std::string& base) {
  return std::string(VQEAC_FIXTURE_DIR) + "/" + base + ".meta.json";
}

inline IntegralSet load(const std::string& base) {
  return load_fcidump(fixture(base));
}

/// Random antisymmetric matrix with entries uniform in [-scale, scale].
inline Mat random_antisymmetric(int n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat k = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < p; ++q) {
      k(p, q) = u(rng);
      k(q, p) = -k(p, q);
    }
  return k;
}

/// Qubit image of an embedded Hamiltonian.
inline PauliSum mapped_hamiltonian(const EmbeddedHamiltonian& emb, Encoding enc) {
  return map_fermion(hamiltonian_to_fermion(emb), 2 * emb.n_act, enc);
}

}  // namespace vqeac::testing
