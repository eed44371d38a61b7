// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/ansatz.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "vqeac/errors.hpp"

namespace vqeac {

std::vector<Ladder> Excitation::ladder() const {
  std::vector<Ladder> ops;
  for (int c : creators) ops.push_back({c, true});
  for (auto it = annihilators.rbegin(); it != annihilators.rend(); ++it)
    ops.push_back({*it, false});
  return ops;
}

FermionOperator ExcitationGenerator::op() const {
  FermionOperator out;
  for (const auto& e : parts) {
    FermionOperator t;
    t.add_term(e.coeff, e.ladder());
    out += t - t.adjoint();
  }
  return out;
}

std::string ExcitationGenerator::label() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) os << (parts[k].coeff < 0 ? " - " : " + ");
    const auto& e = parts[k];
    for (std::size_t i = 0; i < e.annihilators.size(); ++i)
      os << (i ? "," : "") << e.annihilators[i];
    os << "->";
    for (std::size_t i = 0; i < e.creators.size(); ++i)
      os << (i ? "," : "") << e.creators[i];
  }
  return os.str();
}

void AnsatzCircuit::append(AnsatzEntry e) {
  e.param = n_params++;
  entries.push_back(std::move(e));
}

AnsatzEntry OperatorPool::entry(std::size_t k) const {
  AnsatzEntry e;
  if (flavor == PoolFlavor::qubit) {
    e.type = AnsatzEntry::Type::pauli;
    e.pauli = qubit.at(k);
  } else {
    e.type = AnsatzEntry::Type::fermionic;
    e.generator = fermionic.at(k);
  }
  return e;
}

std::vector<int> reference_occupation(int n_spatial, int n_alpha, int n_beta) {
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_spatial || n_beta > n_spatial)
    throw DomainError("electron counts do not fit the active orbitals");
  std::vector<int> occ;
  for (int p = 0; p < n_spatial; ++p) {
    if (p < n_alpha) occ.push_back(2 * p);
    if (p < n_beta) occ.push_back(2 * p + 1);
  }
  return occ;
}

std::vector<Excitation> particle_hole_excitations(int n_spatial, int n_alpha,
                                                  int n_beta, bool singles,
                                                  bool doubles) {
  const auto occ = reference_occupation(n_spatial, n_alpha, n_beta);
  std::vector<int> vir;
  for (int p = 0; p < 2 * n_spatial; ++p)
    if (std::find(occ.begin(), occ.end(), p) == occ.end()) vir.push_back(p);
  std::vector<Excitation> out;
  if (singles)
    for (int i : occ)
      for (int a : vir)
        if ((i & 1) == (a & 1)) out.push_back({{a}, {i}, 1.0});
  if (doubles)
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y)
        for (std::size_t u = 0; u < vir.size(); ++u)
          for (std::size_t w = u + 1; w < vir.size(); ++w) {
            const int i = occ[x], j = occ[y], a = vir[u], b = vir[w];
            if ((i & 1) + (j & 1) != (a & 1) + (b & 1)) continue;
            out.push_back({{a, b}, {i, j}, 1.0});
          }
  return out;
}

namespace {

AnsatzCircuit build_ucc(int n_spatial, int n_alpha, int n_beta, Encoding enc,
                        bool singles) {
  AnsatzCircuit c;
  c.n_qubits = 2 * n_spatial;
  c.encoding = enc;
  c.reference = reference_occupation(n_spatial, n_alpha, n_beta);
  for (auto& e : particle_hole_excitations(n_spatial, n_alpha, n_beta, singles, true)) {
    AnsatzEntry entry;
    entry.generator.kind =
        e.creators.size() == 1 ? ExcitationKind::single : ExcitationKind::double_;
    entry.generator.parts = {std::move(e)};
    c.append(std::move(entry));
  }
  return c;
}

// Spin flip of an excitation with indices re-sorted; the returned coefficient
// carries the permutation sign.
Excitation spin_flip(const Excitation& e) {
  Excitation f;
  double sign = e.coeff;
  auto flip_sorted = [&sign](const std::vector<int>& v) {
    std::vector<int> out;
    for (int p : v) out.push_back(p ^ 1);
    if (out.size() == 2 && out[0] > out[1]) {
      std::swap(out[0], out[1]);
      sign = -sign;
    }
    return out;
  };
  f.creators = flip_sorted(e.creators);
  f.annihilators = flip_sorted(e.annihilators);
  f.coeff = sign;
  return f;
}

}  // namespace

AnsatzCircuit build_uccsd(int n_spatial, int n_alpha, int n_beta, Encoding enc) {
  return build_ucc(n_spatial, n_alpha, n_beta, enc, true);
}

AnsatzCircuit build_uccd(int n_spatial, int n_alpha, int n_beta, Encoding enc) {
  return build_ucc(n_spatial, n_alpha, n_beta, enc, false);
}

std::vector<PauliRotation> trotterize(const ExcitationGenerator& g, int n_qubits,
                                      Encoding enc) {
  // g = sum_k (i c_k) P_k, exp(theta i c_k P_k) = exp(-i (-2 c_k theta) P_k / 2)
  const PauliSum mapped = map_fermion(g.op(), n_qubits, enc);
  std::vector<PauliRotation> out;
  for (const auto& [s, c] : mapped.terms()) {
    if (std::abs(c.real()) > 1e-12)
      throw DomainError("mapped generator has a non-imaginary coefficient");
    out.push_back({s, -2.0 * c.imag()});
  }
  return out;
}

OperatorPool build_fermionic_pool(int n_spatial, int n_alpha, int n_beta) {
  OperatorPool pool;
  pool.flavor = PoolFlavor::fermionic;
  const auto all = particle_hole_excitations(n_spatial, n_alpha, n_beta, true, true);
  std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> position;
  for (std::size_t k = 0; k < all.size(); ++k)
    position[{all[k].creators, all[k].annihilators}] = k;
  std::vector<bool> used(all.size(), false);
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    ExcitationGenerator g;
    g.kind = all[k].creators.size() == 1 ? ExcitationKind::single : ExcitationKind::double_;
    g.parts.push_back(all[k]);
    const Excitation f = spin_flip(all[k]);
    const auto it = position.find({f.creators, f.annihilators});
    if (it != position.end() && !used[it->second]) {
      used[it->second] = true;
      g.parts.push_back(f);
    }
    pool.fermionic.push_back(std::move(g));
  }
  return pool;
}

OperatorPool build_qubit_pool(int n_spatial, int n_alpha, int n_beta, Encoding enc) {
  OperatorPool pool;
  pool.flavor = PoolFlavor::qubit;
  std::set<PauliString> strings;
  const int nq = 2 * n_spatial;
  for (const auto& e : particle_hole_excitations(n_spatial, n_alpha, n_beta, true, true)) {
    ExcitationGenerator g;
    g.parts = {e};
    for (const auto& [s, c] : map_fermion(g.op(), nq, enc).terms()) {
      PauliString stripped{s.n, s.x, s.z & s.x};
      strings.insert(stripped);
    }
  }
  pool.qubit.assign(strings.begin(), strings.end());
  return pool;
}

int rotation_cnots(const PauliString& p) {
  const int w = p.weight();
  return w > 1 ? 2 * (w - 1) : 0;
}

long count_cnots(const AnsatzCircuit& c) {
  long total = 0;
  for (const auto& e : c.entries) {
    if (e.type == AnsatzEntry::Type::pauli) {
      total += rotation_cnots(e.pauli);
    } else {
      for (const auto& r : trotterize(e.generator, c.n_qubits, c.encoding))
        total += rotation_cnots(r.string);
    }
  }
  return total;
}

const char* to_string(PoolFlavor f) {
  switch (f) {
    case PoolFlavor::fermionic: return "fermionic";
    case PoolFlavor::qubit: return "qubit";
    default: return "none";
  }
}

nlohmann::json circuit_summary(const AnsatzCircuit& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : c.entries) {
    if (e.type == AnsatzEntry::Type::pauli)
      entries.push_back({{"param", e.param}, {"pauli", e.pauli.letters()}});
    else
      entries.push_back({{"param", e.param}, {"excitation", e.generator.label()}});
  }
  return {{"n_qubits", c.n_qubits},
          {"encoding", to_string(c.encoding)},
          {"pool_flavor", to_string(c.flavor)},
          {"n_entries", c.entries.size()},
          {"n_params", c.n_params},
          {"cnot_count", count_cnots(c)},
          {"cnot_model", "2(w-1) per weight-w Pauli rotation; reference preparation excluded"},
          {"entries", entries}};
}

}  // namespace vqeac
