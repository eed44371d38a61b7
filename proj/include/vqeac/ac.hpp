// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ac.hpp
 * @brief Adiabatic-connection correlation corrections from active-space
 * RDMs: AC0 (linearized integrand from block ERPA at alpha = 0) and AC
 * (Gauss-Legendre quadrature over alpha).
 *
 * Everything is assembled in the spin-orbital basis (index 2p + spin) of
 * active natural orbitals. A pair (p, q) denotes the excitation a^dag_p a_q
 * with n_q > n_p; its metric entry is n_q - n_p.
 *
 * H^alpha = H0 + alpha (H - H0), where H0 keeps two-electron integrals with
 * all four indices in one orbital group (inactive, active or virtual) and
 * replaces the rest with the mean field of the other groups.
 */

#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vqeac/integrals.hpp"
#include "vqeac/rdm.hpp"

namespace vqeac {

struct NaturalOrbitals {
  Mat rotation;     ///< active x active, columns are natural orbitals
  Vec occupations;  ///< spin-summed, descending
};

/// Eigenbasis of the spin-summed active 1-RDM. The largest-magnitude
/// component of every column is positive.
NaturalOrbitals natural_orbital_basis(const Mat& d1);

enum class OrbitalGroup { inactive = 0, active = 1, virtual_ = 2 };

enum class ErpaBlock { active_active, active_inactive, virtual_active, virtual_inactive, full };

const char* to_string(ErpaBlock b);

struct AcOptions {
  double degeneracy_threshold = 1e-6;  ///< pairs with |n_q - n_p| below are dropped
  double offdiagonal_tolerance = 1e-6;  ///< natural spin-orbital 1-RDM check
  int quadrature_nodes = 5;
  /// Clear when the reference orbitals were not optimized; only adds a warning.
  bool orbital_optimized = true;
};

/// Full-space spin-orbital reference in the natural-orbital basis.
struct AcReference {
  int n_orb = 0;
  int n_so = 0;
  IntegralSet ints;  ///< rotated to active natural orbitals
  ActiveSpace cas;
  std::vector<OrbitalGroup> group;  ///< per spatial orbital
  Vec occupation;                   ///< per spin orbital
  Mat gamma;                        ///< n_so x n_so
  std::vector<double> Gamma;        ///< n_so^4, <a^dag_p a^dag_q a_s a_r>
  double reference_energy = 0.0;
  Mat active_rotation;
};

AcReference make_ac_reference(const IntegralSet& ints, const ActiveSpace& cas,
                              const ReducedDensityMatrices& rdms,
                              const AcOptions& opt = {});

/// Spatial integrals of H^alpha (no scalar part).
struct AlphaHamiltonian {
  double alpha = 0.0;
  Mat h;
  std::vector<double> v;  ///< chemists' order, n^4 row-major
};

AlphaHamiltonian zeroth_order_hamiltonian(const AcReference& ref);
AlphaHamiltonian alpha_hamiltonian(const AcReference& ref, double alpha);

struct ErpaPair {
  int p = 0, q = 0;  ///< spin orbitals, excitation a^dag_p a_q
  double metric = 0.0;
  ErpaBlock block = ErpaBlock::full;
};

struct DroppedPair {
  int p = 0, q = 0;
  double metric = 0.0;
};

struct ErpaBlockProblem {
  ErpaBlock block = ErpaBlock::full;
  std::vector<ErpaPair> pairs;
  Mat A, B;  ///< symmetrized double commutators
  Vec metric;
  Vec occupation;  ///< per spin orbital
  std::vector<DroppedPair> dropped;
};

/// Pairs of one block (or all four blocks in fixed order for `full`).
std::vector<ErpaPair> erpa_pairs(const AcReference& ref, ErpaBlock block,
                                 std::vector<DroppedPair>* dropped = nullptr,
                                 double threshold = 1e-6);

/// <[a^dag_q a_p, H, a^dag_r a_s]>_sym for spin-orbital unit operators,
/// contracted against the reference RDMs.
class DoubleCommutator {
 public:
  DoubleCommutator(const AcReference& ref, const Mat& h, const std::vector<double>& v);
  /// <[[H, E_x], E_y]> with E_x = a^dag_{x.first} a_{x.second}.
  double nested(std::pair<int, int> x, std::pair<int, int> y) const;
  /// Symmetrized double commutator <[E_a, H, E_b]>.
  double symmetric(std::pair<int, int> a, std::pair<int, int> b) const;

 private:
  int n_;
  Mat h_so_, gamma_;
  std::vector<double> v_so_;
  const std::vector<double>* Gamma_;
  Mat yh_[2], yv_[4];
};

ErpaBlockProblem build_erpa_block(const AcReference& ref, const AlphaHamiltonian& ham,
                                  ErpaBlock block, const AcOptions& opt = {});

struct TransitionDensitySet {
  ErpaBlock block = ErpaBlock::full;
  Vec omega;     ///< ascending, positive
  Mat X, Y;      ///< pairs x roots, X^T N X - Y^T N Y = 1
  Mat down, up;  ///< gamma^{0nu}_{qp} = N X and gamma^{0nu}_{pq} = -N Y
};

/// Generalized symplectic eigenproblem. Throws NumericalError (naming the
/// block) on an unstable problem.
TransitionDensitySet solve_erpa(const ErpaBlockProblem& problem);

struct AcBlockContribution {
  ErpaBlock block;
  int n_pairs = 0;
  double energy = 0.0;
  bool skipped = false;
};

struct ACResult {
  std::string method;  ///< "AC0" or "AC"
  int quadrature_nodes = 0;
  double reference_energy = 0.0;
  double e_corr = 0.0;
  double total_energy = 0.0;
  std::vector<AcBlockContribution> blocks;
  std::vector<DroppedPair> dropped;
  std::vector<std::string> warnings;
};

ACResult ac0_correction(const IntegralSet& ints, const ActiveSpace& cas,
                        const ReducedDensityMatrices& rdms, const AcOptions& opt = {});
ACResult ac_correction(const IntegralSet& ints, const ActiveSpace& cas,
                       const ReducedDensityMatrices& rdms, const AcOptions& opt = {});

/// Integrand W(alpha) of the full-space ERPA under fixed RDMs.
double ac_integrand(const AcReference& ref, double alpha, const AcOptions& opt = {});

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, Vec& nodes, Vec& weights);

nlohmann::json to_json(const ACResult& r);

}  // namespace vqeac
