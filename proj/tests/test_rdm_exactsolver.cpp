// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <Eigen/Eigenvalues>
#include <chrono>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vqeac/ansatz.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"
#include "vqeac/rdm.hpp"
#include "vqeac/vqe.hpp"

using namespace vqeac;
using Catch::Approx;

namespace {

struct Case {
  const char* name;
  int n_act_elec;
  int n_act_orb;  // 0 means the full space
};

ActiveSpace make_cas(const IntegralSet& ints, const Case& c) {
  return c.n_act_orb ? ActiveSpace::from_counts(ints, c.n_act_elec, c.n_act_orb)
                     : ActiveSpace::full(ints);
}

// Random UCCSD state over the particle-number sector.
Vec random_ucc_state(const VqeProblem& prob, const EmbeddedHamiltonian& emb, Encoding enc,
                     double scale, std::mt19937_64& rng) {
  const auto c = build_uccsd(emb.n_act, emb.n_alpha, emb.n_beta, enc);
  std::normal_distribution<double> g(0.0, scale);
  Vec theta(c.n_params);
  for (auto& t : theta) t = g(rng);
  return CompiledCircuit(c, prob.basis).state(theta, prob.reference);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double sector_matrix_spectrum_gap(const CMat& dense, const FockBasis& basis,
                                  const std::vector<double>& energies) {
  const Eigen::Index m = Eigen::Index(basis.size());
  CMat block(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      block(i, j) = dense(Eigen::Index(basis.qubit_index(std::size_t(i))),
                          Eigen::Index(basis.qubit_index(std::size_t(j))));
  Eigen::SelfAdjointEigenSolver<CMat> es(block);
  double d = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k)
    d = std::max(d, std::abs(es.eigenvalues()(Eigen::Index(k)) - energies[k]));
  return d;
}

}  // namespace

TEST_CASE("HF determinant RDMs", "[rdm]") {
  const auto ints = testing::load("lih_sto3g_1.6");
  const auto emb = embed_active_space(ints, ActiveSpace::from_counts(ints, 4, 4));
  for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
    const auto prob = VqeProblem::sector(emb, enc);
    const auto rdm = rdms_from_vector(prob.reference, prob.basis);
    const int N = rdm.n_spin();
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q)
        CHECK(rdm.gamma(p, q) == (p == q && p < 4 ? 1.0 : 0.0));
    double wick = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q)
        for (int r = 0; r < N; ++r)
          for (int s = 0; s < N; ++s)
            wick = std::max(wick, std::abs(rdm.G(p, q, r, s) -
                                           (rdm.gamma(p, r) * rdm.gamma(q, s) -
                                            rdm.gamma(p, s) * rdm.gamma(q, r))));
    CHECK(wick < 1e-15);
    CHECK(energy_from_rdms(rdm, emb) == Approx(hf_energy(ints)).margin(1e-10));
    const auto measured = measure_rdms(prob.basis.expand(prob.reference), enc);
    CHECK((measured.gamma - rdm.gamma).norm() < 1e-15);
  }
}

TEST_CASE("measured RDMs equal the dense operator expectations", "[rdm]") {
  // Oracle: every a^dag a and a^dag a^dag a a mapped to a dense matrix and
  // sandwiched with the explicit wavefunction.
  std::mt19937_64 rng(5);
  const auto ints = testing::load("h2_631g_1.0");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
    const auto prob = VqeProblem::sector(emb, enc);
    const Statevector sv = prob.basis.expand(random_ucc_state(prob, emb, enc, 0.4, rng));
    const auto rdm = measure_rdms(sv, enc);
    const int N = 8;
    const CVec& a = sv.amplitudes();
    double e1 = 0.0, e2 = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q) {
        const CMat m = map_fermion(FermionOperator::one_body(p, q), N, enc).to_dense();
        e1 = std::max(e1, std::abs(a.dot(m * a) - rdm.gamma(p, q)));
      }
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q)
        for (int r = 0; r < N; ++r)
          for (int s = r + 1; s < N; ++s) {
            const CMat m =
                map_fermion(FermionOperator::two_body(p, q, s, r), N, enc).to_dense();
            e2 = std::max(e2, std::abs(a.dot(m * a) - rdm.G(p, q, r, s)));
          }
    CHECK(e1 < 1e-12);
    CHECK(e2 < 1e-12);
    CHECK(rdm.gamma.trace() == Approx(2.0).margin(1e-12));
    CHECK_NOTHROW(assert_rdm_identities(rdm));
    CHECK((measure_1rdm(sv, enc) - rdm.gamma).norm() == 0.0);
    CHECK(max_diff(measure_2rdm(sv, enc), rdm.Gamma) == 0.0);

    // Two electrons: the pair density is the rank-one projector of the
    // antisymmetric pair amplitudes.
    Mat pair = Mat::Zero(N * (N - 1) / 2, N * (N - 1) / 2);
    for (int q = 1, i = 0; q < N; ++q)
      for (int p = 0; p < q; ++p, ++i)
        for (int s = 1, j = 0; s < N; ++s)
          for (int r = 0; r < s; ++r, ++j) pair(i, j) = rdm.G(p, q, r, s);
    Eigen::SelfAdjointEigenSolver<Mat> es(pair);
    CHECK(es.eigenvalues().maxCoeff() == Approx(1.0).margin(1e-12));
    CHECK(es.eigenvalues().cwiseAbs().sum() == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("sector and register RDMs agree", "[rdm]") {
  std::mt19937_64 rng(9);
  const auto ints = testing::load("h4_square_sto3g_0.9");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  const Vec v = random_ucc_state(prob, emb, Encoding::parity, 0.3, rng);
  const auto a = rdms_from_vector(v, prob.basis);
  const auto b = measure_rdms(prob.basis.expand(v), Encoding::parity);
  CHECK((a.gamma - b.gamma).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(max_diff(a.Gamma, b.Gamma) < 1e-13);
}

TEST_CASE("energy from RDMs equals the statevector expectation", "[rdm]") {
  // 20 random parameter points spread over fixtures and encodings.
  const Case cases[] = {{"h2_sto3g_0.735", 2, 0},
                        {"h2_631g_0.735", 2, 0},
                        {"lih_sto3g_2.0", 2, 2},
                        {"h4_chain_sto3g_1.0", 4, 4},
                        {"n2_sto3g_1.1", 6, 6}};
  std::mt19937_64 rng(13);
  int points = 0;
  for (const auto& c : cases) {
    const auto ints = testing::load(c.name);
    const auto emb = embed_active_space(ints, make_cas(ints, c));
    for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
      const auto prob = VqeProblem::sector(emb, enc);
      const PauliSum h = 2 * emb.n_act <= 8 ? testing::mapped_hamiltonian(emb, enc) : PauliSum{};
      for (int k = 0; k < 2; ++k, ++points) {
        const Vec v = random_ucc_state(prob, emb, enc, 0.3, rng);
        const auto rdm = rdms_from_vector(v, prob.basis);
        const double e = energy_from_rdms(rdm, emb);
        CHECK(std::abs(e - prob.energy(v)) < 1e-9);
        if (2 * emb.n_act <= 8)
          CHECK(std::abs(e - expectation(prob.basis.expand(v), h)) < 1e-9);
        CHECK_NOTHROW(assert_rdm_identities(rdm));
      }
    }
  }
  CHECK(points == 20);
}

TEST_CASE("identity checks detect violations", "[rdm]") {
  const auto ints = testing::load("h2_sto3g_0.735");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  auto rdm = rdms_from_vector(prob.reference, prob.basis);
  CHECK(check_rdm_identities(rdm).worst() == 0.0);
  auto bad = rdm;
  bad.gamma(0, 1) = 1e-6;
  CHECK(check_rdm_identities(bad).hermiticity == Approx(1e-6));
  CHECK_THROWS_AS(assert_rdm_identities(bad), ConsistencyError);
  bad = rdm;
  bad.Gamma[1] = 1e-6;
  CHECK_THROWS_AS(assert_rdm_identities(bad), ConsistencyError);
  bad = rdm;
  bad.gamma(0, 0) = 2.5;
  bad.gamma(1, 1) = 0.5;
  CHECK(check_rdm_identities(bad).occupation_bounds > 0.9);
}

TEST_CASE("full-space expansion", "[rdm]") {
  std::mt19937_64 rng(17);
  for (const Case& c : {Case{"lih_sto3g_1.6", 2, 3}, Case{"n2_sto3g_1.1", 6, 6},
                        Case{"h4_chain_sto3g_1.0", 2, 2}}) {
    const auto ints = testing::load(c.name);
    const auto cas = make_cas(ints, c);
    const auto emb = embed_active_space(ints, cas);
    const auto prob = VqeProblem::sector(emb, Encoding::parity);
    const auto rdm = rdms_from_vector(random_ucc_state(prob, emb, Encoding::parity, 0.3, rng),
                                      prob.basis);
    const FullSpaceRdm full(rdm, cas, ints.n_orb);
    const int n = ints.n_orb;
    CHECK(full.D1().trace() == Approx(ints.n_elec).margin(1e-10));
    for (int i : cas.inactive) CHECK(full.D1()(i, i) == 2.0);
    for (int a : cas.virtual_) CHECK(full.D1().row(a).norm() == 0.0);
    // Spin-summed partial trace: sum_q D2_pqrq = (N - 1) D1_pr.
    const auto d2 = full.D2_dense();
    double pt = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int q = 0; q < n; ++q) acc += d2[((std::size_t(p) * n + q) * n + r) * n + q];
        pt = std::max(pt, std::abs(acc - (ints.n_elec - 1) * full.D1()(p, r)));
      }
    CHECK(pt < 1e-10);
    CHECK(std::abs(energy_from_full_rdms(full, ints) - energy_from_rdms(rdm, emb)) < 1e-9);
  }
}

TEST_CASE("empty active space expands to the inactive determinant", "[rdm]") {
  const auto ints = testing::load("lih_sto3g_1.6");
  ActiveSpace cas;
  cas.inactive = {0, 1};
  for (int p = 2; p < ints.n_orb; ++p) cas.virtual_.push_back(p);
  cas.validate(ints);
  ReducedDensityMatrices empty;
  const FullSpaceRdm full(empty, cas, ints.n_orb);
  CHECK(full.D1().trace() == 4.0);
  CHECK(energy_from_full_rdms(full, ints) == Approx(hf_energy(ints)).margin(1e-10));
}

TEST_CASE("RDMs transform covariantly with the orbitals", "[rdm]") {
  // Oracle: the ground state recomputed in rotated integrals.
  const auto ints = testing::load("h2_631g_1.0");
  const int n = ints.n_orb;
  std::mt19937_64 rng(23);
  std::vector<Mat> rotations;
  Mat k2 = Mat::Zero(n, n);
  k2(1, 0) = 0.3;
  k2(0, 1) = -0.3;
  rotations.push_back(antisymmetric_exp(k2));
  rotations.push_back(antisymmetric_exp(testing::random_antisymmetric(n, 0.5, rng)));
  const DeterminantSpace space(n, 1, 1);
  const auto ref = fci_solve(embed_active_space(ints, ActiveSpace::full(ints)), 1, 1);
  const auto rdm = rdms_from_civector(ref.vectors[0], space);
  for (const Mat& u : rotations) {
    const auto rot = transform_orbitals(ints, u);
    const auto r = fci_solve(embed_active_space(rot, ActiveSpace::full(rot)), 1, 1);
    CHECK(r.energies[0] == Approx(ref.energies[0]).margin(1e-9));
    const auto measured = rdms_from_civector(r.vectors[0], space);
    const auto transformed = transform_rdms(rdm, u);
    CHECK((measured.gamma - transformed.gamma).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_diff(measured.Gamma, transformed.Gamma) < 1e-9);
  }
}

TEST_CASE("RDM dump format", "[rdm]") {
  const auto ints = testing::load("h2_sto3g_0.735");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::jordan_wigner);
  const auto rdm = rdms_from_vector(prob.reference, prob.basis);
  std::ostringstream os;
  dump_rdms(rdm, os);
  std::istringstream in(os.str());
  std::string line;
  int ones = 0, twos = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() == 3) ++ones;
    if (tok.size() == 5) ++twos;
  }
  CHECK(ones == 2);
  CHECK(twos == 4);  // Gamma_0101 and its three antisymmetric images
  CHECK(os.str().rfind("0 0 1.000000000000e+00\n", 0) == 0);
}

TEST_CASE("one orbital with two electrons", "[exactsolver]") {
  IntegralSet ints;
  ints.n_orb = 1;
  ints.n_elec = 2;
  ints.core_energy = 0.7;
  ints.h = Mat::Constant(1, 1, -1.3);
  ints.v = EriTensor(1);
  ints.v.set(0, 0, 0, 0, 0.65);
  CHECK(fci_energy(ints) == Approx(2 * -1.3 + 0.65 + 0.7).margin(1e-14));
  CHECK(DeterminantSpace(1, 1, 1).dim() == 1);
}

TEST_CASE("determinant space enumeration", "[exactsolver]") {
  const DeterminantSpace s(10, 7, 7);
  CHECK(s.dim() == 14400);
  const auto& a = s.alpha_strings();
  CHECK(std::is_sorted(a.begin(), a.end()));
  for (auto x : a) CHECK(std::popcount(x) == 7);
  CHECK_THROWS_AS(DeterminantSpace(3, 4, 1), DomainError);
  const auto ints = testing::load("n2_sto3g_1.1");
  FciOptions opt;
  opt.max_dim = 1000;
  CHECK_THROWS_AS(fci_solve(embed_active_space(ints, ActiveSpace::full(ints)), 7, 7, opt),
                  SizeError);
}

TEST_CASE("FCI spectra equal the mapped qubit Hamiltonian", "[exactsolver]") {
  const Case cases[] = {{"h2_sto3g_0.735", 2, 0},
                        {"h2_631g_1.5", 2, 0},
                        {"h4_square_sto3g_0.9", 4, 0},
                        {"lih_sto3g_2.5", 2, 5}};
  for (const auto& c : cases) {
    const auto ints = testing::load(c.name);
    const auto emb = embed_active_space(ints, make_cas(ints, c));
    const DeterminantSpace space(emb.n_act, emb.n_alpha, emb.n_beta);
    FciOptions opt;
    opt.n_roots = int(std::min<std::size_t>(space.dim(), 10));
    const auto fci = fci_solve(emb, emb.n_alpha, emb.n_beta, opt);
    for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
      const CMat dense = testing::mapped_hamiltonian(emb, enc).to_dense();
      const auto basis = FockBasis::sector(emb.n_act, emb.n_alpha, emb.n_beta, enc);
      CHECK(sector_matrix_spectrum_gap(dense, basis, fci.energies) < 1e-10);
    }
  }
}

TEST_CASE("Davidson agrees with dense diagonalization", "[exactsolver]") {
  for (const Case& c : {Case{"h4_square_sto3g_0.9", 4, 0}, Case{"lih_sto3g_1.6", 4, 0},
                        Case{"n2_sto3g_1.5", 6, 6}}) {
    const auto ints = testing::load(c.name);
    const auto emb = embed_active_space(ints, make_cas(ints, c));
    FciOptions dense;
    dense.n_roots = 3;
    FciOptions dav = dense;
    dav.force_davidson = true;
    const auto a = fci_solve(emb, emb.n_alpha, emb.n_beta, dense);
    const auto b = fci_solve(emb, emb.n_alpha, emb.n_beta, dav);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a.energies[k] - b.energies[k]) < 1e-10);
    CHECK(std::abs(std::abs(a.vectors[0].dot(b.vectors[0])) - 1.0) < 1e-9);
    CHECK(b.iterations > 0);
  }
}

TEST_CASE("sigma vector equals the sparse Hamiltonian", "[exactsolver]") {
  const auto ints = testing::load("n2_sto3g_1.1");
  const auto emb = embed_active_space(ints, ActiveSpace::from_counts(ints, 6, 6));
  const DeterminantSpace space(6, 3, 3);
  const auto basis = FockBasis::sector(6, 3, 3, Encoding::parity);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vec c(Eigen::Index(space.dim()));
  for (auto& x : c) x = g(rng);
  const Vec sigma = civector_to_sector(fci_sigma(emb, space, c), space, basis);
  const Csr h = build_sparse_hamiltonian(emb, basis);
  const Vec v = civector_to_sector(c, space, basis);
  Vec hv(v.size());
  kernels::serial::csr_matvec(h, v.data(), hv.data());
  CHECK((sigma - hv).cwiseAbs().maxCoeff() < 1e-10);
  Vec diag = fci_diagonal(emb, space);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    Vec e = Vec::Zero(c.size());
    e(i) = 1.0;
    CHECK(fci_sigma(emb, space, e)(i) == Approx(diag(i)).margin(1e-12));
    if (i > 20) break;
  }
}

TEST_CASE("N2 full FCI against the fixture sidecar", "[exactsolver][slow]") {
  const auto ints = testing::load("n2_sto3g_1.1");
  const auto meta = load_fixture_meta(testing::fixture_meta("n2_sto3g_1.1"));
  const auto t0 = std::chrono::steady_clock::now();
  const double e = fci_energy(ints);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(meta.fci_energy.has_value());
  CHECK(e == Approx(*meta.fci_energy).margin(1e-8));
  CHECK(secs < 60.0);
}

TEST_CASE("CASCI bounds", "[exactsolver]") {
  for (const char* name : {"lih_sto3g_2.0", "h4_chain_sto3g_1.0", "n2_sto3g_2.0"}) {
    const auto ints = testing::load(name);
    const auto meta = load_fixture_meta(testing::fixture_meta(name));
    const double cas22 = casci_energy(ints, ActiveSpace::from_counts(ints, 2, 2));
    const double cas44 = casci_energy(ints, ActiveSpace::from_counts(ints, 4, 4));
    CHECK(hf_energy(ints) >= cas22 - 1e-9);
    CHECK(cas22 >= cas44 - 1e-9);
    REQUIRE(meta.fci_energy.has_value());
    CHECK(cas44 >= *meta.fci_energy - 1e-9);
  }
  const auto h4 = testing::load("h4_square_sto3g_0.9");
  CHECK(casci_energy(h4, ActiveSpace::full(h4)) == Approx(fci_energy(h4)).margin(1e-12));
}

TEST_CASE("CI-vector RDMs", "[exactsolver][rdm]") {
  SECTION("single determinant gives the HF RDMs") {
    const DeterminantSpace space(4, 2, 2);
    Vec c = Vec::Zero(Eigen::Index(space.dim()));
    c(0) = 1.0;  // lowest alpha and beta strings
    const auto rdm = rdms_from_civector(c, space);
    const Vec diag = rdm.gamma.diagonal();
    for (int p = 0; p < 8; ++p) CHECK(diag(p) == (p < 4 ? 1.0 : 0.0));
    CHECK(check_rdm_identities(rdm).worst() < 1e-14);
  }
  SECTION("FCI RDMs match the measured register") {
    const auto ints = testing::load("h4_chain_sto3g_1.0");
    const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
    const DeterminantSpace space(4, 2, 2);
    const auto fci = fci_solve(emb, 2, 2);
    const auto rdm = rdms_from_civector(fci.vectors[0], space);
    CHECK_NOTHROW(assert_rdm_identities(rdm));
    CHECK(energy_from_rdms(rdm, emb) == Approx(fci.energies[0]).margin(1e-10));
    for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
      const auto sv = civector_to_statevector(fci.vectors[0], space, enc);
      CHECK(std::abs(expectation(sv, testing::mapped_hamiltonian(emb, enc)) -
                     fci.energies[0]) < 1e-10);
      const auto m = measure_rdms(sv, enc);
      CHECK((m.gamma - rdm.gamma).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(max_diff(m.Gamma, rdm.Gamma) < 1e-12);
    }
  }
}
