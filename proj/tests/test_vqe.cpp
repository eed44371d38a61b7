// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vqeac/ansatz.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"
#include "vqeac/statevector.hpp"
#include "vqeac/vqe.hpp"

using namespace vqeac;

namespace {

struct Case {
  const char* name;
  int n_elec, n_orb;  // active space; 0 means full
};

const Case kCases[] = {{"h2_sto3g_0.735", 0, 0},
                       {"h2_631g_0.735", 0, 0},
                       {"h4_chain_sto3g_1.0", 0, 0},
                       {"lih_sto3g_1.6", 2, 3}};

ActiveSpace cas_of(const IntegralSet& ints, const Case& c) {
  return c.n_orb ? ActiveSpace::from_counts(ints, c.n_elec, c.n_orb) : ActiveSpace::full(ints);
}

Vec random_theta(int n, std::mt19937_64& rng, double scale = 0.4) {
  std::normal_distribution<double> g(0.0, scale);
  Vec t(n);
  for (auto& x : t) x = g(rng);
  return t;
}

}  // namespace

TEST_CASE("energy at zero parameters is the reference energy", "[vqe]") {
  for (const auto& c : kCases) {
    const auto ints = testing::load(c.name);
    const auto cas = cas_of(ints, c);
    const auto emb = embed_active_space(ints, cas);
    const auto circ = build_uccsd(emb.n_act, emb.n_alpha, emb.n_beta, Encoding::parity);
    const auto prob = VqeProblem::sector(emb, Encoding::parity);
    const Vec zero = Vec::Zero(circ.n_params);
    const double e_sector = energy_of(zero, CompiledCircuit(circ, prob.basis), prob);
    CHECK(std::abs(e_sector - hf_energy(ints)) < 1e-10);
    const PauliSum h = map_fermion(hamiltonian_to_fermion(emb), circ.n_qubits, circ.encoding);
    CHECK(std::abs(energy_of(zero, circ, h) - e_sector) < 1e-10);
    CHECK_THROWS_AS(energy_of(Vec::Zero(circ.n_params + 1), circ, h), DomainError);
  }
}

TEST_CASE("sector and register paths agree at random parameters", "[vqe]") {
  std::mt19937_64 rng(4);
  const auto ints = testing::load("h4_square_sto3g_0.9");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
    const auto circ = build_uccsd(4, 2, 2, enc);
    const auto prob = VqeProblem::sector(emb, enc);
    const CompiledCircuit cc(circ, prob.basis);
    const PauliSum h = map_fermion(hamiltonian_to_fermion(emb), 8, enc);
    for (int t = 0; t < 3; ++t) {
      const Vec theta = random_theta(circ.n_params, rng);
      CHECK(std::abs(energy_of(theta, cc, prob) - energy_of(theta, circ, h)) < 1e-10);
    }
  }
}

TEST_CASE("analytic gradient matches central differences", "[vqe][gradient]") {
  std::mt19937_64 rng(7);
  for (const auto& c : kCases) {
    const auto ints = testing::load(c.name);
    const auto emb = embed_active_space(ints, cas_of(ints, c));
    const auto circ = build_uccsd(emb.n_act, emb.n_alpha, emb.n_beta, Encoding::parity);
    const auto prob = VqeProblem::sector(emb, Encoding::parity);
    const CompiledCircuit cc(circ, prob.basis);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const Vec theta = random_theta(circ.n_params, rng);
      const Vec g = analytic_gradient(theta, cc, prob);
      const double h = 1e-5;
      for (int k = 0; k < circ.n_params; ++k) {
        Vec tp = theta, tm = theta;
        tp(k) += h;
        tm(k) -= h;
        const double fd = (energy_of(tp, cc, prob) - energy_of(tm, cc, prob)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g(k)));
      }
    }
    INFO(c.name);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("gradient at the reference is the commutator expectation", "[vqe][gradient]") {
  const auto ints = testing::load("h2_sto3g_0.735");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  for (Encoding enc : {Encoding::jordan_wigner, Encoding::parity}) {
    const auto circ = build_uccsd(2, 1, 1, enc);
    const auto prob = VqeProblem::sector(emb, enc);
    const Vec g = analytic_gradient(Vec::Zero(circ.n_params), CompiledCircuit(circ, prob.basis), prob);
    const PauliSum h = map_fermion(hamiltonian_to_fermion(emb), 4, enc);
    const Statevector hf = prepare_reference(circ.reference, 4, enc);
    for (const auto& e : circ.entries) {
      const PauliSum G = map_fermion(e.generator.op(), 4, enc);
      const CVec& a = hf.amplitudes();
      const cplx comm = a.dot(commutator(h, G).to_dense() * a);
      // 2 Re <HF|H G|HF> form of the same quantity
      const cplx hg = a.dot(h.to_dense() * (G.to_dense() * a));
      CHECK(std::abs(comm.imag()) < 1e-12);
      CHECK(std::abs(g(e.param) - comm.real()) < 1e-10);
      CHECK(std::abs(g(e.param) - 2.0 * hg.real()) < 1e-10);
    }
    // singles vanish at the HF reference (Brillouin), the double does not
    CHECK(std::abs(g(0)) < 1e-10);
    CHECK(std::abs(g(2)) > 1e-3);
  }
}

TEST_CASE("generator acting on empty orbitals has zero gradient", "[vqe][gradient]") {
  const auto ints = testing::load("h4_chain_sto3g_1.0");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  AnsatzCircuit c;
  c.n_qubits = 8;
  c.encoding = Encoding::parity;
  c.reference = prob.reference_occupation;
  AnsatzEntry e;
  e.generator.kind = ExcitationKind::single;
  e.generator.parts = {{{6}, {4}, 1.0}};  // both virtual in the reference
  c.append(e);
  CHECK(std::abs(analytic_gradient(Vec::Zero(1), CompiledCircuit(c, prob.basis), prob)(0)) < 1e-14);
}

TEST_CASE("H2 UCCSD reaches FCI", "[vqe]") {
  for (const char* name : {"h2_sto3g_0.735", "h2_631g_0.735"}) {
    const auto ints = testing::load(name);
    const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
    const auto circ = build_uccsd(emb.n_act, 1, 1, Encoding::parity);
    const auto prob = VqeProblem::sector(emb, Encoding::parity);
    const auto r = minimize(circ, prob, Vec::Zero(circ.n_params));
    CHECK(r.converged);
    CHECK(r.energy <= r.reference_energy + 1e-12);
    if (std::string(name) == "h2_sto3g_0.735") CHECK(std::abs(r.energy - fci_energy(ints)) < 1e-8);
    CHECK(r.energy >= fci_energy(ints) - 1e-9);

    // restart at the optimum
    const auto again = minimize(circ, prob, r.theta);
    CHECK(again.iterations == 0);
    CHECK(again.energy == r.energy);

    // deterministic given theta0
    const auto twice = minimize(circ, prob, Vec::Zero(circ.n_params));
    CHECK(twice.energy == r.energy);
    CHECK(twice.theta == r.theta);
    CHECK(to_json(twice).dump() == to_json(r).dump());
  }
}

TEST_CASE("H4 square UCCSD stays close to FCI", "[vqe]") {
  const auto ints = testing::load("h4_square_sto3g_0.9");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto circ = build_uccsd(4, 2, 2, Encoding::parity);
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  const auto r = minimize(circ, prob, Vec::Zero(circ.n_params));
  const double fci = fci_energy(ints);
  CHECK(r.energy >= fci - 1e-9);
  CHECK(r.energy - fci < 2e-3);
}

TEST_CASE("VQE energies are bounded below by CASCI", "[vqe]") {
  std::mt19937_64 rng(13);
  for (const auto& c : kCases) {
    const auto ints = testing::load(c.name);
    const auto cas = cas_of(ints, c);
    const auto emb = embed_active_space(ints, cas);
    const double ecas = casci_energy(ints, cas);
    const auto circ = build_uccsd(emb.n_act, emb.n_alpha, emb.n_beta, Encoding::parity);
    const auto prob = VqeProblem::sector(emb, Encoding::parity);
    const CompiledCircuit cc(circ, prob.basis);
    for (int t = 0; t < 5; ++t)
      CHECK(energy_of(random_theta(circ.n_params, rng, 1.0), cc, prob) >= ecas - 1e-9);
    CHECK(minimize(circ, prob, Vec::Zero(circ.n_params)).energy >= ecas - 1e-9);
  }
}

TEST_CASE("ADAPT on H2 selects the double first", "[vqe][adapt]") {
  const auto ints = testing::load("h2_sto3g_0.735");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  const auto pool = build_fermionic_pool(2, 1, 1);
  const Vec g = pool_gradients(pool, prob.reference, prob);
  Eigen::Index best;
  g.cwiseAbs().maxCoeff(&best);
  CHECK(pool.fermionic[std::size_t(best)].kind == ExcitationKind::double_);

  const auto r = adapt_loop(pool, prob, AdaptOptions{});
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().selected == std::size_t(best));
  CHECK(std::abs(r.vqe.energy - fci_energy(ints)) < 1e-8);
  CHECK(r.converged);
}

TEST_CASE("ADAPT with nothing to add returns the reference", "[vqe][adapt]") {
  const auto ints = testing::load("h2_sto3g_0.735");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  AdaptOptions opt;
  opt.eps_grad = 10.0;
  const auto r = adapt_loop(build_fermionic_pool(2, 1, 1), prob, opt);
  CHECK(r.trace.empty());
  CHECK(r.circuit.n_params == 0);
  CHECK(r.vqe.energy == Catch::Approx(hf_energy(ints)).margin(1e-12));
  CHECK(r.converged);
  CHECK_THROWS_AS(adapt_loop(OperatorPool{}, prob, opt), DomainError);
}

TEST_CASE("ADAPT selection matches an exhaustive pool scan on H4", "[vqe][adapt]") {
  const auto ints = testing::load("h4_chain_sto3g_1.0");
  const auto emb = embed_active_space(ints, ActiveSpace::full(ints));
  for (auto flavor : {PoolFlavor::fermionic, PoolFlavor::qubit}) {
    const auto prob = flavor == PoolFlavor::qubit ? VqeProblem::full_space(emb, Encoding::parity)
                                                   : VqeProblem::sector(emb, Encoding::parity);
    const auto pool = flavor == PoolFlavor::qubit ? build_qubit_pool(4, 2, 2, Encoding::parity)
                                                   : build_fermionic_pool(4, 2, 2);
    AdaptOptions opt;
    opt.max_iter = 1;
    AdaptResult r = adapt_loop(pool, prob, opt);
    for (int it = 0; it < 4; ++it) {
      // Exhaustive scan: append each element and differentiate the energy
      // at its zero angle by central differences.
      std::size_t best = 0;
      double best_g = -1.0;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        AnsatzCircuit trial = r.circuit;
        trial.append(pool.entry(k));
        const CompiledCircuit cc(trial, prob.basis);
        Vec tp = Vec::Zero(trial.n_params);
        tp.head(r.vqe.theta.size()) = r.vqe.theta;
        Vec tm = tp;
        tp(trial.n_params - 1) = 1e-5;
        tm(trial.n_params - 1) = -1e-5;
        const double gk = std::abs(energy_of(tp, cc, prob) - energy_of(tm, cc, prob)) / 2e-5;
        if (gk > best_g + 1e-7) {
          best_g = gk;
          best = k;
        }
      }
      const std::size_t before = r.trace.size();
      r = adapt_loop(pool, prob, opt, &r);
      REQUIRE(r.trace.size() == before + 1);
      CHECK(r.trace.back().selected == best);
      CHECK(std::abs(r.trace.back().gradient - best_g) < 1e-6);
    }
  }
}

TEST_CASE("ADAPT trace is monotone and reoptimized operators have zero gradient",
          "[vqe][adapt]") {
  const auto ints = testing::load("n2_sto3g_1.1");
  const auto cas = ActiveSpace::from_counts(ints, 6, 6);
  const auto emb = embed_active_space(ints, cas);
  const auto prob = VqeProblem::sector(emb, Encoding::parity);
  const auto pool = build_fermionic_pool(6, 3, 3);
  AdaptOptions opt;
  opt.max_iter = 30;
  opt.eps_grad = 0.0;
  const auto r = adapt_loop(pool, prob, opt);
  REQUIRE(r.trace.size() == 30);
  double prev = r.vqe.reference_energy;
  for (const auto& rec : r.trace) {
    CHECK(rec.energy <= prev + 1e-9);
    prev = rec.energy;
  }
  CHECK(r.vqe.energy >= casci_energy(ints, cas) - 1e-9);
  const Vec g = pool_gradients(pool, r.vqe.state, prob);
  // Appending the last operator again has the same derivative as its parameter.
  CHECK(r.vqe.grad_norm < opt.vqe.gtol * 10);
  CHECK(std::abs(g(Eigen::Index(r.trace.back().selected))) <= r.vqe.grad_norm + 1e-10);

  std::ostringstream csv;
  write_trace_csv(r.trace, csv);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,energy,grad,cnots");
  CHECK(to_json(r.trace).size() == 30);
}

TEST_CASE("qubit-ADAPT circuits are much cheaper than fermionic ADAPT", "[vqe][adapt]") {
  const auto ints = testing::load("n2_sto3g_1.1");
  const auto emb = embed_active_space(ints, ActiveSpace::from_counts(ints, 6, 6));
  AdaptOptions opt;
  opt.max_iter = 24;
  opt.eps_grad = 0.0;
  const auto f = adapt_loop(build_fermionic_pool(6, 3, 3),
                            VqeProblem::sector(emb, Encoding::jordan_wigner), opt);
  const auto q = adapt_loop(build_qubit_pool(6, 3, 3, Encoding::jordan_wigner),
                            VqeProblem::full_space(emb, Encoding::jordan_wigner), opt);
  REQUIRE(f.trace.size() == 24);
  REQUIRE(q.trace.size() == 24);
  // order of magnitude of a thousand CNOTs for 24 fermionic iterations
  CHECK(f.trace.back().cnots >= 300);
  CHECK(f.trace.back().cnots <= 5000);
  CHECK(5 * q.trace.back().cnots <= f.trace.back().cnots);
}
