// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief Active-space reduced density matrices and their full-space
 * expansion.
 *
 * Spin-orbital conventions: gamma_pq = <a^dag_p a_q>,
 * Gamma_pqrs = <a^dag_p a^dag_q a_s a_r>. Spin-summed views:
 * D1_pq = sum_s gamma_{ps,qs}, D2_pqrs = sum_{s,t} Gamma_{ps,qt,rs,st}, so
 * that E = e_core + sum h_pq D1_pq + 1/2 sum (pr|qs) D2_pqrs.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vqeac/integrals.hpp"
#include "vqeac/sector.hpp"
#include "vqeac/statevector.hpp"

namespace vqeac {

struct ReducedDensityMatrices {
  int n_act = 0;   ///< spatial active orbitals
  int n_elec = 0;  ///< active electrons
  Mat gamma;       ///< 2n x 2n
  std::vector<double> Gamma;  ///< (2n)^4, index ((p*N+q)*N+r)*N+s
  std::string basis_tag;

  int n_spin() const { return 2 * n_act; }
  double G(int p, int q, int r, int s) const {
    const std::size_t N = std::size_t(n_spin());
    return Gamma[((p * N + q) * N + r) * N + s];
  }
  Mat D1() const;
  /// Spin-summed 2-RDM, n^4 row-major.
  std::vector<double> D2() const;
};

/// RDMs of a real vector over a FockBasis.
ReducedDensityMatrices rdms_from_vector(const Vec& v, const FockBasis& basis);

/// Measured on a register (amplitudes decoded through the mapping).
/// Hermitized; DomainError if the raw asymmetry exceeds 1e-10.
Mat measure_1rdm(const Statevector& state, Encoding enc);
std::vector<double> measure_2rdm(const Statevector& state, Encoding enc);
ReducedDensityMatrices measure_rdms(const Statevector& state, Encoding enc);

/// e_core + sum h_eff gamma + 1/2 sum <pq|rs> Gamma.
double energy_from_rdms(const ReducedDensityMatrices& rdm, const EmbeddedHamiltonian& emb);

/// Largest violation of each identity (0 when exact).
struct RdmViolations {
  double hermiticity = 0.0;
  double trace = 0.0;
  double antisymmetry = 0.0;
  double partial_trace = 0.0;
  double occupation_bounds = 0.0;  ///< distance of D1 eigenvalues outside [0, 2]
  double worst() const;
};
RdmViolations check_rdm_identities(const ReducedDensityMatrices& rdm);

/// Throws ConsistencyError when any identity is violated beyond its
/// tolerance (1e-10 for the algebraic ones, 1e-9 for occupation bounds).
void assert_rdm_identities(const ReducedDensityMatrices& rdm);

/// Spin-summed full-orbital-space RDMs built on demand from active RDMs and
/// the determinantal inactive core.
class FullSpaceRdm {
 public:
  FullSpaceRdm(const ReducedDensityMatrices& act, const ActiveSpace& cas, int n_orb);

  int n_orb() const noexcept { return n_; }
  const ActiveSpace& cas() const noexcept { return cas_; }
  /// Spin-summed 1-RDM over all orbitals.
  const Mat& D1() const noexcept { return d1_; }
  /// Spin-summed 2-RDM element over all orbitals.
  double D2(int p, int q, int r, int s) const;
  /// Full n^4 tensor (small systems and tests).
  std::vector<double> D2_dense() const;

 private:
  int n_;
  ActiveSpace cas_;
  std::vector<int> cls_;
  std::vector<int> act_pos_;
  Mat d1_;
  std::vector<double> d2_act_;
  int na_;
};

/// Energy of full-space RDMs with full-space integrals.
double energy_from_full_rdms(const FullSpaceRdm& rdm, const IntegralSet& ints);

/// Rotates the active-space RDMs by an orthogonal matrix on the spatial
/// active orbitals (phi' = phi u).
ReducedDensityMatrices transform_rdms(const ReducedDensityMatrices& rdm, const Mat& u);

/// "p q value" and "p q r s value" lines (spin-orbital active indices).
void dump_rdms(const ReducedDensityMatrices& rdm, std::ostream& os);

}  // namespace vqeac
