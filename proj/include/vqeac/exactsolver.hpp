// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file exactsolver.hpp
 * @brief Determinant-basis FCI / CASCI (string-driven sigma, Davidson).
 *
 * A determinant is an (alpha string, beta string) pair of spatial-orbital
 * bitmasks with all alpha creators to the left of the beta ones. CI vectors
 * are indexed alpha-major: I = ia * n_beta_strings + ib.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "vqeac/integrals.hpp"
#include "vqeac/rdm.hpp"
#include "vqeac/sector.hpp"

namespace vqeac {

class DeterminantSpace {
 public:
  DeterminantSpace(int n_orb, int n_alpha, int n_beta);

  int n_orb() const noexcept { return n_; }
  int n_alpha() const noexcept { return na_; }
  int n_beta() const noexcept { return nb_; }
  std::size_t dim() const noexcept { return alpha_.size() * beta_.size(); }
  const std::vector<std::uint64_t>& alpha_strings() const noexcept { return alpha_; }
  const std::vector<std::uint64_t>& beta_strings() const noexcept { return beta_; }

  /// One entry of a single-replacement list: E_pq |I> = sign |J>.
  struct Replacement {
    std::uint32_t target;
    std::uint16_t pq;  ///< p * n + q
    std::int8_t sign;
  };
  const std::vector<std::vector<Replacement>>& alpha_replacements() const { return ra_; }
  const std::vector<std::vector<Replacement>>& beta_replacements() const { return rb_; }

  /// Interleaved spin-orbital occupation of determinant I and the sign that
  /// takes the alpha-major determinant to the ascending-mode one.
  std::uint64_t occupation(std::size_t I, double& sign) const;

 private:
  int n_, na_, nb_;
  std::vector<std::uint64_t> alpha_, beta_;
  std::vector<std::vector<Replacement>> ra_, rb_;
};

struct FciResult {
  std::vector<double> energies;
  std::vector<Vec> vectors;
  int iterations = 0;
};

struct FciOptions {
  int n_roots = 1;
  double residual_tol = 1e-9;
  int max_subspace = 40;
  int max_iter = 1000;
  std::size_t dense_limit = 2000;  ///< dense diagonalization at or below
  std::size_t max_dim = 1000000;
  bool force_davidson = false;
};

/// Lowest roots of the embedded Hamiltonian (energies include e_core).
FciResult fci_solve(const EmbeddedHamiltonian& emb, int n_alpha, int n_beta,
                    const FciOptions& opt = {});

/// sigma = H c (including e_core).
Vec fci_sigma(const EmbeddedHamiltonian& emb, const DeterminantSpace& space, const Vec& c);
Vec fci_diagonal(const EmbeddedHamiltonian& emb, const DeterminantSpace& space);

double casci_energy(const IntegralSet& ints, const ActiveSpace& cas);
double fci_energy(const IntegralSet& ints);

/// CI vector expressed over the sector FockBasis (phases included).
Vec civector_to_sector(const Vec& c, const DeterminantSpace& space, const FockBasis& basis);
/// 2^n register image of a CI vector.
Statevector civector_to_statevector(const Vec& c, const DeterminantSpace& space,
                                    Encoding enc);

ReducedDensityMatrices rdms_from_civector(const Vec& c, const DeterminantSpace& space);

}  // namespace vqeac
