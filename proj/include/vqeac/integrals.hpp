// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrals.hpp
 * @brief Molecular integrals: FCIDUMP ingestion, orbital rotations and
 *        complete-active-space embedding.
 *
 * Two-electron integrals use chemists' notation (pq|rs) over real spatial
 * orbitals and are stored as the 8-fold symmetry-unique set.
 */

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "vqeac/linalg.hpp"

namespace vqeac {

/// Packed (pq|rs) tensor with 8-fold permutational symmetry.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int n);

  int n() const noexcept { return n_; }
  double operator()(int p, int q, int r, int s) const {
    return data_[index(p, q, r, s)];
  }
  void set(int p, int q, int r, int s, double value) {
    data_[index(p, q, r, s)] = value;
  }
  std::size_t packed_size() const noexcept { return data_.size(); }

  /// Row-major n^4 copy, index ((p*n+q)*n+r)*n+s.
  std::vector<double> dense() const;
  /// Packs a dense tensor, reading the p>=q, r>=s, pq>=rs image.
  static EriTensor from_dense(int n, const std::vector<double>& dense);
  /// Largest spread between the 8 symmetry images of a dense tensor.
  static double symmetry_residual(int n, const std::vector<double>& dense);

  static std::size_t pair(int p, int q) {
    return p >= q ? std::size_t(p) * (p + 1) / 2 + q
                  : std::size_t(q) * (q + 1) / 2 + p;
  }
  static std::size_t index(int p, int q, int r, int s) {
    const std::size_t pq = pair(p, q), rs = pair(r, s);
    return pq >= rs ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
  }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Spatial-orbital Hamiltonian data in Hartree.
struct IntegralSet {
  int n_orb = 0;
  int n_elec = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  Mat h;
  EriTensor v;
  std::vector<int> orbsym;
  int isym = 1;

  int n_alpha() const { return (n_elec + ms2) / 2; }
  int n_beta() const { return (n_elec - ms2) / 2; }
};

/// Metadata sidecar written next to each fixture as `<basename>.meta.json`.
struct FixtureMeta {
  std::string name;
  std::string basis;
  double hf_energy = 0.0;
  double nuclear_repulsion = 0.0;
  std::optional<double> fci_energy;
  std::string engine;
  std::string engine_version;
  std::string generator_version;
};

IntegralSet parse_fcidump(std::istream& in);
IntegralSet load_fcidump(const std::string& path);
FixtureMeta load_fixture_meta(const std::string& path);

/// Energy of a single determinant given spatial occupations per spin.
double determinant_energy(const IntegralSet& ints,
                          const std::vector<int>& alpha_occ,
                          const std::vector<int>& beta_occ);
/// Aufbau determinant (lowest orbitals) energy; the RHF/ROHF energy when the
/// orbitals are canonical.
double hf_energy(const IntegralSet& ints);

/// Orbital partition into inactive / active / virtual sets.
struct ActiveSpace {
  std::vector<int> inactive;
  std::vector<int> active;
  std::vector<int> virtual_;
  int n_act_elec = 0;

  int n_act() const { return int(active.size()); }
  /// Lowest `(n_elec - n_act_elec)/2` orbitals inactive, next `n_act_orb`
  /// active, rest virtual.
  static ActiveSpace from_counts(const IntegralSet& ints, int n_act_elec,
                                 int n_act_orb);
  /// Every orbital active.
  static ActiveSpace full(const IntegralSet& ints);
  /// Throws DomainError unless the sets partition the orbitals and the
  /// electron count is consistent.
  void validate(const IntegralSet& ints) const;
  /// 0 inactive, 1 active, 2 virtual, indexed by orbital.
  std::vector<int> classes(int n_orb) const;
};

/// Active-space Hamiltonian with the inactive orbitals folded into a scalar
/// and an effective one-electron operator.
struct EmbeddedHamiltonian {
  int n_act = 0;
  int n_alpha = 0;
  int n_beta = 0;
  double e_core = 0.0;
  Mat h_eff;
  EriTensor v_act;
};

EmbeddedHamiltonian embed_active_space(const IntegralSet& ints,
                                       const ActiveSpace& cas);

/// Integrals in the rotated basis phi' = phi * exp(kappa).
IntegralSet rotate_orbitals(const IntegralSet& ints, const Mat& kappa);
/// Integrals in the basis phi' = phi * u for orthogonal u.
IntegralSet transform_orbitals(const IntegralSet& ints, const Mat& u);
/// Four sequential one-index transforms of a dense tensor.
std::vector<double> transform_eri_dense(int n, const std::vector<double>& v,
                                        const Mat& u);

}  // namespace vqeac
