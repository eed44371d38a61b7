// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/orbital_opt.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "vqeac/errors.hpp"
#include "vqeac/exactsolver.hpp"

namespace vqeac {

namespace {

// Spin-summed RDMs as dense arrays; P is the chemists'-order 2-RDM with
// E2 = 1/2 sum (ab|cd) P_abcd.
struct DenseRdm {
  int n = 0;
  Mat D1;
  std::vector<double> P;
};

DenseRdm densify(const FullSpaceRdm& rdm) {
  DenseRdm d;
  d.n = rdm.n_orb();
  d.D1 = rdm.D1();
  const std::size_t n = std::size_t(d.n);
  d.P.assign(n * n * n * n, 0.0);
  const auto d2 = rdm.D2_dense();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e)
          d.P[((a * n + b) * n + c) * n + e] = d2[((a * n + c) * n + b) * n + e];
  return d;
}

double energy_dense(const DenseRdm& r, double core, const Mat& h, const std::vector<double>& v) {
  double two = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) two += v[k] * r.P[k];
  return core + (h.array() * r.D1.array()).sum() + 0.5 * two;
}

// F_pq = sum_r D_pr h_qr + sum_rst P_prst (qr|st)
Mat fock_dense(const DenseRdm& r, const Mat& h, const std::vector<double>& v) {
  const Eigen::Index n = r.n, n3 = n * n * n;
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> P(r.P.data(), n, n3);
  Eigen::Map<const RowMat> V(v.data(), n, n3);
  Mat F = r.D1 * h.transpose();
  F.noalias() += P * V.transpose();
  return F;
}

bool class_enabled(int ca, int cb, const RotationClasses& cls) {
  if (ca > cb) std::swap(ca, cb);
  if (ca == 0 && cb == 1) return cls.inactive_active;
  if (ca == 0 && cb == 2) return cls.inactive_virtual;
  if (ca == 1 && cb == 2) return cls.active_virtual;
  if (ca == 1 && cb == 1) return cls.active_active;
  return false;
}

Mat mask_gradient(Mat g, const ActiveSpace& cas, int n, const RotationClasses& cls) {
  const auto c = cas.classes(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p == q || !class_enabled(c[p], c[q], cls)) g(p, q) = 0.0;
  return g;
}

// Adjoint of the differential of exp at kappa: sum_k ad_kappa^k(g) / (k+1)!
Mat dexp_adjoint(const Mat& kappa, const Mat& g) {
  Mat term = g, out = g;
  for (int k = 1; k < 60; ++k) {
    term = (kappa * term - term * kappa) / double(k + 1);
    out += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  return out;
}

struct Entry {
  int from, to;
  double val;
};

// sum_abcd P_abcd prod_i M_i[from_i -> to_i] v_{from}: the fixed-RDM
// contraction of integrals with one-index transforms applied per position.
double contract_transformed(const DenseRdm& r, const std::vector<double>& v,
                            const std::vector<Entry>* lists[4]) {
  const std::size_t n = std::size_t(r.n);
  double acc = 0.0;
  for (const Entry& e0 : *lists[0])
    for (const Entry& e1 : *lists[1])
      for (const Entry& e2 : *lists[2]) {
        const double w = e0.val * e1.val * e2.val;
        const std::size_t pf = ((e0.from * n + e1.from) * n + e2.from) * n;
        const std::size_t pt = ((e0.to * n + e1.to) * n + e2.to) * n;
        double inner = 0.0;
        for (const Entry& e3 : *lists[3]) inner += e3.val * r.P[pt + e3.to] * v[pf + e3.from];
        acc += w * inner;
      }
  return acc;
}

}  // namespace

std::vector<std::pair<int, int>> rotation_pairs(const ActiveSpace& cas, int n_orb,
                                                const RotationClasses& cls) {
  const auto c = cas.classes(n_orb);
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q < p; ++q)
      if (class_enabled(c[p], c[q], cls)) out.emplace_back(p, q);
  return out;
}

Mat generalized_fock(const FullSpaceRdm& rdm, const IntegralSet& ints) {
  if (rdm.n_orb() != ints.n_orb) throw DomainError("RDM / integral basis mismatch");
  return fock_dense(densify(rdm), ints.h, ints.v.dense());
}

Mat orbital_gradient(const FullSpaceRdm& rdm, const IntegralSet& ints,
                     const RotationClasses& cls) {
  const Mat F = generalized_fock(rdm, ints);
  return mask_gradient(2.0 * (F.transpose() - F), rdm.cas(), ints.n_orb, cls);
}

Vec orbital_hessian_diagonal_raw(const FullSpaceRdm& rdm, const IntegralSet& ints,
                                 const std::vector<std::pair<int, int>>& pairs) {
  const int n = ints.n_orb;
  const DenseRdm r = densify(rdm);
  const auto v = ints.v.dense();
  std::vector<Entry> ident;
  for (int a = 0; a < n; ++a) ident.push_back({a, a, 1.0});
  Vec out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [p, q] = pairs[k];
    // K = e_pq - e_qp, U = exp(x K); U' = K, U'' = K^2 = -(e_pp + e_qq).
    Mat K = Mat::Zero(n, n);
    K(p, q) = 1.0;
    K(q, p) = -1.0;
    const Mat K2 = K * K;
    const Mat h2 = K2 * ints.h + 2.0 * K.transpose() * ints.h * K + ints.h * K2;
    double e = (h2.array() * r.D1.array()).sum();
    const std::vector<Entry> k1 = {{p, q, 1.0}, {q, p, -1.0}};
    const std::vector<Entry> k2 = {{p, p, -1.0}, {q, q, -1.0}};
    double two = 0.0;
    const std::vector<Entry>* lists[4];
    for (int i = 0; i < 4; ++i) {
      for (int m = 0; m < 4; ++m) lists[m] = &ident;
      lists[i] = &k2;
      two += contract_transformed(r, v, lists);
      for (int j = 0; j < 4; ++j) {
        if (j == i) continue;
        for (int m = 0; m < 4; ++m) lists[m] = &ident;
        lists[i] = &k1;
        lists[j] = &k1;
        two += contract_transformed(r, v, lists);
      }
    }
    e += 0.5 * two;
    out(Eigen::Index(k)) = e;
  }
  return out;
}

Vec orbital_hessian_diagonal(const FullSpaceRdm& rdm, const IntegralSet& ints,
                             const std::vector<std::pair<int, int>>& pairs, double floor) {
  Vec d = orbital_hessian_diagonal_raw(rdm, ints, pairs);
  if (d.size() && d.minCoeff() < floor) d.array() += floor - d.minCoeff();
  return d;
}

double fixed_rdm_energy(const FullSpaceRdm& rdm, const IntegralSet& ints, const Mat& kappa) {
  const IntegralSet rot = rotate_orbitals(ints, kappa);
  return energy_dense(densify(rdm), rot.core_energy, rot.h, rot.v.dense());
}

Mat fixed_rdm_gradient(const FullSpaceRdm& rdm, const IntegralSet& ints, const Mat& kappa,
                       const RotationClasses& cls) {
  const IntegralSet rot = rotate_orbitals(ints, kappa);
  const Mat F = fock_dense(densify(rdm), rot.h, rot.v.dense());
  const Mat local = 2.0 * (F.transpose() - F);
  return mask_gradient(dexp_adjoint(kappa, local), rdm.cas(), ints.n_orb, cls);
}

MacroOptions toggle_active_active(MacroOptions opt, bool enabled) {
  opt.active_active = enabled;
  return opt;
}

const char* to_string(InnerSolver s) {
  switch (s) {
    case InnerSolver::casci: return "casci";
    case InnerSolver::uccsd: return "uccsd";
    case InnerSolver::uccd: return "uccd";
    case InnerSolver::adapt: return "adapt";
    default: return "qubit-adapt";
  }
}

namespace {

// Inner solver state carried across macro-iterations.
struct Inner {
  MacroOptions opt;
  AnsatzCircuit circuit;
  OperatorPool pool;
  Vec theta;
  std::optional<AdaptResult> adapt;
  int n_alpha = 0, n_beta = 0, n_act = 0;

  Inner(const EmbeddedHamiltonian& emb, const MacroOptions& o)
      : opt(o), n_alpha(emb.n_alpha), n_beta(emb.n_beta), n_act(emb.n_act) {
    switch (opt.solver) {
      case InnerSolver::uccsd:
        circuit = build_uccsd(n_act, n_alpha, n_beta, opt.encoding);
        break;
      case InnerSolver::uccd:
        circuit = build_uccd(n_act, n_alpha, n_beta, opt.encoding);
        break;
      case InnerSolver::adapt:
        pool = build_fermionic_pool(n_act, n_alpha, n_beta);
        break;
      case InnerSolver::qubit_adapt:
        pool = build_qubit_pool(n_act, n_alpha, n_beta, opt.encoding);
        break;
      default:
        break;
    }
    theta = Vec::Zero(circuit.n_params);
  }

  // Solves on the embedded Hamiltonian; fills energy, RDMs and VQE record.
  void solve(const EmbeddedHamiltonian& emb, MacroResult& out, int& evaluations) {
    if (opt.solver == InnerSolver::casci) {
      const FciResult fr = fci_solve(emb, n_alpha, n_beta);
      const DeterminantSpace space(n_act, n_alpha, n_beta);
      out.energy = fr.energies.at(0);
      out.rdms = rdms_from_civector(fr.vectors.at(0), space);
      out.vqe = VqeResult{};
      out.vqe.energy = out.energy;
      out.vqe.converged = true;
      evaluations = 1;
      return;
    }
    if (opt.solver == InnerSolver::uccsd || opt.solver == InnerSolver::uccd) {
      const VqeProblem prob = VqeProblem::sector(emb, opt.encoding);
      out.vqe = minimize(circuit, prob, theta, opt.vqe);
      theta = out.vqe.theta;
      out.circuit = circuit;
      out.energy = out.vqe.energy;
      out.rdms = rdms_from_vector(out.vqe.state, prob.basis);
      evaluations = out.vqe.evaluations;
      return;
    }
    const VqeProblem prob = opt.solver == InnerSolver::qubit_adapt
                                ? VqeProblem::full_space(emb, opt.encoding)
                                : VqeProblem::sector(emb, opt.encoding);
    AdaptOptions ao = opt.adapt;
    if (adapt) ao.max_iter = std::max(0, opt.adapt.max_iter - int(adapt->trace.size()));
    adapt = adapt_loop(pool, prob, ao, adapt ? &*adapt : nullptr);
    out.vqe = adapt->vqe;
    out.circuit = adapt->circuit;
    out.adapt_trace = adapt->trace;
    out.energy = out.vqe.energy;
    out.rdms = rdms_from_vector(out.vqe.state, prob.basis);
    evaluations = out.vqe.evaluations;
  }
};

void finish_inner(MacroResult& out, const EmbeddedHamiltonian& emb, bool check) {
  out.rdms.n_elec = emb.n_alpha + emb.n_beta;
  if (check) assert_rdm_identities(out.rdms);
  const double e_rdm = energy_from_rdms(out.rdms, emb);
  if (std::abs(e_rdm - out.energy) > 1e-8)
    throw ConsistencyError("RDM energy " + std::to_string(e_rdm) +
                           " differs from the solver energy " + std::to_string(out.energy));
}

}  // namespace

MacroResult solve_active_space(const IntegralSet& ints, const ActiveSpace& cas,
                               const MacroOptions& opt) {
  cas.validate(ints);
  const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
  MacroResult out;
  out.cas = cas;
  out.ints = ints;
  out.rotation = Mat::Identity(ints.n_orb, ints.n_orb);
  Inner inner(emb, opt);
  int evals = 0;
  inner.solve(emb, out, evals);
  finish_inner(out, emb, opt.check_rdms);
  if (opt.on_inner_solve) opt.on_inner_solve(0, out.rdms);
  out.trace.push_back({0, out.energy, 0.0, evals, 0.0});
  out.converged = out.vqe.converged;
  return out;
}

MacroResult macro_iterate(const IntegralSet& ints, const ActiveSpace& cas,
                          const MacroOptions& opt) {
  cas.validate(ints);
  const int n = ints.n_orb;
  RotationClasses cls;
  cls.active_active = opt.active_active.value_or(opt.solver != InnerSolver::casci);
  const auto pairs = rotation_pairs(cas, n, cls);

  MacroResult out;
  out.cas = cas;
  out.active_active = cls.active_active;
  out.ints = ints;
  out.rotation = Mat::Identity(n, n);
  std::optional<Inner> inner;
  double e_prev = 0.0;

  for (int it = 0; it < opt.max_macro; ++it) {
    const EmbeddedHamiltonian emb = embed_active_space(out.ints, cas);
    if (!inner) inner.emplace(emb, opt);
    int evals = 0;
    inner->solve(emb, out, evals);
    finish_inner(out, emb, opt.check_rdms);
    if (opt.on_inner_solve) opt.on_inner_solve(it, out.rdms);
    const FullSpaceRdm full(out.rdms, cas, n);
    const Mat g = orbital_gradient(full, out.ints, cls);
    const double ginf = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
    MacroRecord rec{it, out.energy, ginf, evals, 0.0};

    if (it > 0 && out.energy > e_prev + 1e-8) {
      out.trace.push_back(rec);
      throw MacroIterationError("macro-iteration " + std::to_string(it) +
                                    " raised the energy by " +
                                    std::to_string(out.energy - e_prev),
                                out.trace);
    }
    const bool done = ginf < opt.gtol && (it > 0 && std::abs(out.energy - e_prev) < opt.etol);
    if (done || pairs.empty()) {
      out.trace.push_back(rec);
      out.converged = true;
      break;
    }
    e_prev = out.energy;

    // Outer step: preconditioned BFGS on the fixed-RDM energy.
    const DenseRdm dense = densify(full);
    const auto vdense = out.ints.v.dense();
    const Vec hdiag = orbital_hessian_diagonal(full, out.ints, pairs);
    auto to_kappa = [&](const Vec& x) {
      Mat k = Mat::Zero(n, n);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        k(pairs[i].first, pairs[i].second) = x(Eigen::Index(i));
        k(pairs[i].second, pairs[i].first) = -x(Eigen::Index(i));
      }
      return k;
    };
    auto objective = [&](const Vec& x, Vec& grad) {
      const Mat kappa = to_kappa(x);
      const Mat u = antisymmetric_exp(kappa);
      const Mat h = u.transpose() * out.ints.h * u;
      const auto v = transform_eri_dense(n, vdense, u);
      const Mat F = fock_dense(dense, h, v);
      const Mat gm = dexp_adjoint(kappa, 2.0 * (F.transpose() - F));
      grad.resize(Eigen::Index(pairs.size()));
      for (std::size_t i = 0; i < pairs.size(); ++i)
        grad(Eigen::Index(i)) = gm(pairs[i].first, pairs[i].second);
      return energy_dense(dense, out.ints.core_energy, h, v);
    };
    BfgsOptions bo;
    bo.gtol = std::min(1e-7, 0.1 * opt.gtol);
    bo.max_iter = opt.bfgs_max_iter;
    const BfgsResult br =
        bfgs_minimize(objective, Vec::Zero(Eigen::Index(pairs.size())), bo, hdiag.cwiseInverse());
    const Mat u = antisymmetric_exp(to_kappa(br.x));
    out.ints = transform_orbitals(out.ints, u);
    out.rotation = out.rotation * u;
    rec.step_norm = br.x.size() ? br.x.cwiseAbs().maxCoeff() : 0.0;
    out.trace.push_back(rec);
  }
  return out;
}

void write_macro_trace_csv(const std::vector<MacroRecord>& trace, std::ostream& os) {
  os << "macro_iter,energy,grad_inf,inner_evaluations,step_norm\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%d,%.12g\n", r.iteration, r.energy,
                  r.grad_inf, r.inner_evaluations, r.step_norm);
    os << buf;
  }
}

void dump_rotation(const Mat& u, std::ostream& os) {
  char buf[64];
  for (Eigen::Index p = 0; p < u.rows(); ++p) {
    for (Eigen::Index q = 0; q < u.cols(); ++q) {
      std::snprintf(buf, sizeof buf, "%s%.15e", q ? " " : "", u(p, q));
      os << buf;
    }
    os << '\n';
  }
}

nlohmann::json to_json(const std::vector<MacroRecord>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : trace)
    out.push_back({{"macro_iter", r.iteration},
                   {"energy", r.energy},
                   {"grad_inf", r.grad_inf},
                   {"inner_evaluations", r.inner_evaluations},
                   {"step_norm", r.step_norm}});
  return out;
}

}  // namespace vqeac
