// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/vqe.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "vqeac/errors.hpp"
#include "vqeac/statevector.hpp"

namespace vqeac {

namespace k = kernels::omp;

namespace {

Vec unit_reference(const FockBasis& basis, const std::vector<int>& occ) {
  std::uint64_t bits = 0;
  for (int p : occ) bits |= std::uint64_t(1) << p;
  const std::int64_t pos = basis.find(bits);
  if (pos < 0) throw DomainError("reference determinant not in the basis");
  Vec v = Vec::Zero(basis.size());
  v(pos) = 1.0;
  return v;
}

VqeProblem make_problem(const EmbeddedHamiltonian& emb, FockBasis basis) {
  VqeProblem p;
  p.n_spatial = emb.n_act;
  p.n_alpha = emb.n_alpha;
  p.n_beta = emb.n_beta;
  p.basis = std::move(basis);
  p.hamiltonian = build_sparse_hamiltonian(emb, p.basis);
  p.reference_occupation = reference_occupation(emb.n_act, emb.n_alpha, emb.n_beta);
  p.reference = unit_reference(p.basis, p.reference_occupation);
  return p;
}

}  // namespace

VqeProblem VqeProblem::sector(const EmbeddedHamiltonian& emb, Encoding enc) {
  return make_problem(emb, FockBasis::sector(emb.n_act, emb.n_alpha, emb.n_beta, enc));
}

VqeProblem VqeProblem::full_space(const EmbeddedHamiltonian& emb, Encoding enc) {
  return make_problem(emb, FockBasis::full(2 * emb.n_act, enc));
}

Vec VqeProblem::apply_h(const Vec& v) const {
  Vec out(v.size());
  k::csr_matvec(hamiltonian, v.data(), out.data());
  return out;
}

double VqeProblem::energy(const Vec& v) const {
  const Vec hv = apply_h(v);
  return k::dot(v.data(), hv.data(), std::size_t(v.size()));
}

CompiledCircuit::Entry CompiledCircuit::lower(const AnsatzEntry& e, const FockBasis& basis) {
  Entry out;
  out.param = e.param;
  if (e.type == AnsatzEntry::Type::pauli) {
    out.parts.push_back({pauli_pairs(e.pauli, basis), 1.0});
  } else {
    for (const auto& part : e.generator.parts)
      out.parts.push_back({excitation_pairs(part.ladder(), basis), part.coeff});
  }
  return out;
}

CompiledCircuit::CompiledCircuit(const AnsatzCircuit& c, const FockBasis& basis) {
  if (c.n_qubits != basis.n_qubits()) throw DomainError("circuit/basis qubit mismatch");
  for (const auto& e : c.entries) append(e, basis);
  n_params_ = std::max(n_params_, c.n_params);
}

void CompiledCircuit::append(const AnsatzEntry& e, const FockBasis& basis) {
  entries_.push_back(lower(e, basis));
  n_params_ = std::max(n_params_, e.param + 1);
}

void CompiledCircuit::rotate(const Entry& e, double theta, Vec& v) const {
  for (const auto& part : e.parts) k::pair_rotation(v.data(), part.pairs, theta * part.factor);
}

Vec CompiledCircuit::generator_apply(const Entry& e, const Vec& v) const {
  Vec out = Vec::Zero(v.size());
  if (e.parts.size() == 1 && e.parts[0].factor == 1.0) {
    k::pair_apply(v.data(), out.data(), e.parts[0].pairs);
    return out;
  }
  Vec tmp(v.size());
  for (const auto& part : e.parts) {
    tmp.setZero();
    k::pair_apply(v.data(), tmp.data(), part.pairs);
    out += part.factor * tmp;
  }
  return out;
}

Vec CompiledCircuit::state(const Vec& theta, const Vec& reference) const {
  if (theta.size() < n_params_) throw DomainError("parameter vector too short");
  Vec v = reference;
  for (const auto& e : entries_) rotate(e, theta(e.param), v);
  return v;
}

Vec CompiledCircuit::generator_gradients(const Vec& psi, const Vec& hpsi) const {
  Vec g(entries_.size());
  const std::size_t n = std::size_t(psi.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Vec gp = generator_apply(entries_[i], psi);
    g(Eigen::Index(i)) = 2.0 * k::dot(hpsi.data(), gp.data(), n);
  }
  return g;
}

double CompiledCircuit::energy_and_gradient(const Vec& theta, const VqeProblem& prob,
                                            Vec& grad) const {
  Vec psi = state(theta, prob.reference);
  Vec lambda = prob.apply_h(psi);
  const std::size_t n = std::size_t(psi.size());
  const double e = k::dot(psi.data(), lambda.data(), n);
  grad = Vec::Zero(theta.size());
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    const Vec gp = generator_apply(*it, psi);
    grad(it->param) += 2.0 * k::dot(lambda.data(), gp.data(), n);
    rotate(*it, -theta(it->param), psi);
    rotate(*it, -theta(it->param), lambda);
  }
  return e;
}

double energy_of(const Vec& theta, const AnsatzCircuit& c, const PauliSum& h) {
  if (theta.size() != c.n_params) throw DomainError("parameter count mismatch");
  Statevector sv = prepare_reference(c.reference, c.n_qubits, c.encoding);
  for (const auto& e : c.entries) {
    if (e.type == AnsatzEntry::Type::pauli) {
      // exp(theta i P) = exp(-i (-2 theta) P / 2)
      apply_pauli_rotation(sv, e.pauli, -2.0 * theta(e.param));
    } else {
      for (const auto& r : trotterize(e.generator, c.n_qubits, c.encoding))
        apply_pauli_rotation(sv, r.string, r.factor * theta(e.param));
    }
  }
  return expectation(sv, h);
}

double energy_of(const Vec& theta, const CompiledCircuit& c, const VqeProblem& prob) {
  if (theta.size() != c.n_params()) throw DomainError("parameter count mismatch");
  return prob.energy(c.state(theta, prob.reference));
}

Vec analytic_gradient(const Vec& theta, const CompiledCircuit& c, const VqeProblem& prob) {
  if (theta.size() != c.n_params()) throw DomainError("parameter count mismatch");
  Vec g;
  c.energy_and_gradient(theta, prob, g);
  return g;
}

VqeResult minimize(const AnsatzCircuit& c, const VqeProblem& prob, const Vec& theta0,
                   const VqeOptions& opt) {
  if (theta0.size() != c.n_params) throw DomainError("parameter count mismatch");
  const CompiledCircuit cc(c, prob.basis);
  BfgsOptions bo;
  bo.gtol = opt.gtol;
  bo.max_iter = opt.max_iter;
  const BfgsResult br = bfgs_minimize(
      [&](const Vec& x, Vec& g) { return cc.energy_and_gradient(x, prob, g); }, theta0, bo);
  VqeResult r;
  r.energy = br.f;
  r.reference_energy = prob.energy(prob.reference);
  r.theta = br.x;
  r.state = cc.state(br.x, prob.reference);
  r.iterations = br.iterations;
  r.grad_norm = br.grad.size() ? br.grad.cwiseAbs().maxCoeff() : 0.0;
  r.evaluations = br.evaluations;
  r.converged = br.converged;
  r.circuit = circuit_summary(c);
  return r;
}

AnsatzCircuit pool_circuit(const OperatorPool& pool, int n_qubits, Encoding enc) {
  AnsatzCircuit c;
  c.n_qubits = n_qubits;
  c.encoding = enc;
  c.flavor = pool.flavor;
  for (std::size_t i = 0; i < pool.size(); ++i) c.append(pool.entry(i));
  return c;
}

Vec pool_gradients(const OperatorPool& pool, const Vec& psi, const VqeProblem& prob) {
  const CompiledCircuit cc(
      pool_circuit(pool, prob.basis.n_qubits(), prob.basis.encoding()), prob.basis);
  return cc.generator_gradients(psi, prob.apply_h(psi));
}

AdaptResult adapt_loop(const OperatorPool& pool, const VqeProblem& prob,
                       const AdaptOptions& opt, const AdaptResult* start) {
  if (pool.size() == 0) throw DomainError("empty operator pool");
  const int nq = prob.basis.n_qubits();
  const Encoding enc = prob.basis.encoding();
  const CompiledCircuit pool_cc(pool_circuit(pool, nq, enc), prob.basis);

  AdaptResult res;
  Vec theta;
  if (start) {
    res.circuit = start->circuit;
    res.trace = start->trace;
    theta = start->vqe.theta;
  } else {
    res.circuit.n_qubits = nq;
    res.circuit.encoding = enc;
    res.circuit.reference = prob.reference_occupation;
    res.circuit.flavor = pool.flavor;
  }
  res.vqe = minimize(res.circuit, prob, theta, opt.vqe);
  theta = res.vqe.theta;

  for (int it = 0; it < opt.max_iter; ++it) {
    const Vec& psi = res.vqe.state;
    const Vec g = pool_cc.generator_gradients(psi, prob.apply_h(psi));
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < g.size(); ++i)
      if (std::abs(g(i)) > std::abs(g(best))) best = i;
    if (std::abs(g(best)) < opt.eps_grad) {
      res.converged = true;
      break;
    }
    res.circuit.append(pool.entry(std::size_t(best)));
    Vec next = Vec::Zero(res.circuit.n_params);
    next.head(theta.size()) = theta;
    res.vqe = minimize(res.circuit, prob, next, opt.vqe);
    theta = res.vqe.theta;

    AdaptRecord rec;
    rec.iteration = int(res.trace.size()) + 1;
    rec.selected = std::size_t(best);
    rec.label = pool.flavor == PoolFlavor::qubit ? pool.qubit[best].letters()
                                                 : pool.fermionic[best].label();
    rec.gradient = std::abs(g(best));
    rec.energy = res.vqe.energy;
    rec.cnots = count_cnots(res.circuit);
    rec.n_params = res.circuit.n_params;
    res.trace.push_back(rec);
  }
  res.vqe.circuit = circuit_summary(res.circuit);
  return res;
}

void write_trace_csv(const std::vector<AdaptRecord>& trace, std::ostream& os) {
  os << "iteration,energy,grad,cnots\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%ld\n", r.iteration, r.energy,
                  r.gradient, r.cnots);
    os << buf;
  }
}

nlohmann::json to_json(const VqeResult& r) {
  return {{"energy", r.energy},
          {"reference_energy", r.reference_energy},
          {"theta", std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size())},
          {"iterations", r.iterations},
          {"grad_norm", r.grad_norm},
          {"evaluations", r.evaluations},
          {"converged", r.converged},
          {"circuit", r.circuit}};
}

nlohmann::json to_json(const std::vector<AdaptRecord>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : trace)
    out.push_back({{"iteration", r.iteration},
                   {"selected", r.selected},
                   {"operator", r.label},
                   {"gradient", r.gradient},
                   {"energy", r.energy},
                   {"cnots", r.cnots},
                   {"n_params", r.n_params}});
  return out;
}

}  // namespace vqeac
