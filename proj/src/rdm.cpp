// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/rdm.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "vqeac/errors.hpp"

namespace vqeac {

namespace {

// Real or complex amplitudes over occupation strings; RDMs via annihilated
// vectors: gamma_pq = <a_p psi|a_q psi>, Gamma_pqrs = <a_q a_p psi|a_s a_r psi>.
template <class Scalar>
struct Annihilated {
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  V one;  // columns: a_p psi
  V two;  // columns: a_s a_r psi for r < s
};

template <class Scalar>
Annihilated<Scalar> annihilate(int ns, const std::vector<std::uint64_t>& occ,
                               const std::vector<Scalar>& amp) {
  Annihilated<Scalar> out;
  std::unordered_map<std::uint64_t, Eigen::Index> idx1, idx2;
  for (std::size_t k = 0; k < occ.size(); ++k)
    for (int p = 0; p < ns; ++p) {
      if (!(occ[k] >> p & 1)) continue;
      const std::uint64_t y = occ[k] ^ (std::uint64_t(1) << p);
      idx1.emplace(y, Eigen::Index(idx1.size()));
      for (int q = 0; q < ns; ++q)
        if (q != p && (y >> q & 1))
          idx2.emplace(y ^ (std::uint64_t(1) << q), Eigen::Index(idx2.size()));
    }
  const int npair = ns * (ns - 1) / 2;
  out.one = Annihilated<Scalar>::V::Zero(Eigen::Index(idx1.size()), ns);
  out.two = Annihilated<Scalar>::V::Zero(Eigen::Index(idx2.size()), npair);
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (amp[k] == Scalar(0)) continue;
    for (int r = 0; r < ns; ++r) {
      std::uint64_t y = occ[k];
      double sg = 1.0;
      if (!apply_ladder(y, r, false, sg)) continue;
      out.one(idx1.at(y), r) += sg * amp[k];
      for (int s = r + 1; s < ns; ++s) {
        std::uint64_t z = y;
        double s2 = sg;
        if (!apply_ladder(z, s, false, s2)) continue;
        const int col = s * (s - 1) / 2 + r;
        out.two(idx2.at(z), col) += s2 * amp[k];
      }
    }
  }
  return out;
}

template <class Scalar>
ReducedDensityMatrices assemble(int ns, const Annihilated<Scalar>& a) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M g1 = a.one.adjoint() * a.one;
  const M g2 = a.two.adjoint() * a.two;
  auto real_hermitian = [](const M& m, const char* what) {
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
      throw DomainError(std::string(what) + " asymmetry " + std::to_string(asym));
    const M h = 0.5 * (m + m.adjoint());
    const double imag = h.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-10)
      throw DomainError(std::string(what) + " has imaginary part " + std::to_string(imag));
    return Mat(h.real());
  };
  ReducedDensityMatrices r;
  r.n_act = ns / 2;
  r.gamma = ns ? real_hermitian(g1, "1-RDM") : Mat();
  const Mat pair = ns > 1 ? real_hermitian(g2, "2-RDM") : Mat();
  r.n_elec = int(std::lround(r.gamma.trace()));
  const std::size_t N = std::size_t(ns);
  r.Gamma.assign(N * N * N * N, 0.0);
  // pair(col(p,q), col(r,s)) = <a_q a_p psi|a_s a_r psi> = Gamma_pqrs, p<q, r<s.
  for (int q = 1; q < ns; ++q)
    for (int p = 0; p < q; ++p)
      for (int s = 1; s < ns; ++s)
        for (int rr = 0; rr < s; ++rr) {
          const double v = pair(q * (q - 1) / 2 + p, s * (s - 1) / 2 + rr);
          auto set = [&](int i, int j, int k, int l, double x) {
            r.Gamma[((i * N + j) * N + k) * N + l] = x;
          };
          set(p, q, rr, s, v);
          set(q, p, rr, s, -v);
          set(p, q, s, rr, -v);
          set(q, p, s, rr, v);
        }
  return r;
}

}  // namespace

Mat ReducedDensityMatrices::D1() const {
  const int n = n_act;
  Mat d = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) d(p, q) = gamma(2 * p, 2 * q) + gamma(2 * p + 1, 2 * q + 1);
  return d;
}

std::vector<double> ReducedDensityMatrices::D2() const {
  const std::size_t n = std::size_t(n_act);
  std::vector<double> d(n * n * n * n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              acc += G(2 * p + a, 2 * q + b, 2 * r + a, 2 * s + b);
          d[((p * n + q) * n + r) * n + s] = acc;
        }
  return d;
}

ReducedDensityMatrices rdms_from_vector(const Vec& v, const FockBasis& basis) {
  if (std::size_t(v.size()) != basis.size()) throw DomainError("vector size mismatch");
  std::vector<std::uint64_t> occ(basis.size());
  std::vector<double> amp(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    occ[k] = basis.occupation(k);
    amp[k] = v(Eigen::Index(k));
  }
  return assemble(basis.n_qubits(), annihilate(basis.n_qubits(), occ, amp));
}

ReducedDensityMatrices measure_rdms(const Statevector& state, Encoding enc) {
  const int ns = state.n_qubits();
  const std::uint64_t mask = ns == 64 ? ~0ull : ((std::uint64_t(1) << ns) - 1);
  std::vector<std::uint64_t> occ;
  std::vector<cplx> amp;
  for (std::size_t b = 0; b < state.dim(); ++b) {
    const cplx a = state.amplitudes()(Eigen::Index(b));
    if (a == cplx(0.0)) continue;
    occ.push_back(decode_occupation(b, enc) & mask);
    amp.push_back(a);
  }
  return assemble(ns, annihilate(ns, occ, amp));
}

Mat measure_1rdm(const Statevector& state, Encoding enc) {
  return measure_rdms(state, enc).gamma;
}

std::vector<double> measure_2rdm(const Statevector& state, Encoding enc) {
  return measure_rdms(state, enc).Gamma;
}

double energy_from_rdms(const ReducedDensityMatrices& rdm, const EmbeddedHamiltonian& emb) {
  if (rdm.n_act != emb.n_act) throw DomainError("RDM / Hamiltonian size mismatch");
  const int n = emb.n_act;
  const Mat d1 = rdm.D1();
  const auto d2 = rdm.D2();
  double e = emb.e_core + (emb.h_eff.array() * d1.array()).sum();
  double two = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          two += emb.v_act(p, r, q, s) * d2[((std::size_t(p) * n + q) * n + r) * n + s];
  return e + 0.5 * two;
}

double RdmViolations::worst() const {
  return std::max({hermiticity, trace, antisymmetry, partial_trace, occupation_bounds});
}

RdmViolations check_rdm_identities(const ReducedDensityMatrices& rdm) {
  RdmViolations v;
  const int N = rdm.n_spin();
  if (N == 0) return v;
  v.hermiticity = (rdm.gamma - rdm.gamma.transpose()).cwiseAbs().maxCoeff();
  const double ne = rdm.gamma.trace();
  v.trace = std::abs(ne - rdm.n_elec);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) {
          const double g = rdm.G(p, q, r, s);
          v.antisymmetry = std::max({v.antisymmetry, std::abs(g + rdm.G(q, p, r, s)),
                                     std::abs(g + rdm.G(p, q, s, r)),
                                     std::abs(g - rdm.G(r, s, p, q))});
        }
  for (int p = 0; p < N; ++p)
    for (int r = 0; r < N; ++r) {
      double acc = 0.0;
      for (int q = 0; q < N; ++q) acc += rdm.G(p, q, r, q);
      v.partial_trace =
          std::max(v.partial_trace, std::abs(acc - (rdm.n_elec - 1) * rdm.gamma(p, r)));
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(rdm.D1());
  const Vec occ = es.eigenvalues();
  v.occupation_bounds = std::max({0.0, -occ.minCoeff(), occ.maxCoeff() - 2.0});
  return v;
}

void assert_rdm_identities(const ReducedDensityMatrices& rdm) {
  const RdmViolations v = check_rdm_identities(rdm);
  auto fail = [](const char* what, double x) {
    throw ConsistencyError(std::string("RDM ") + what + " violation " + std::to_string(x));
  };
  if (v.hermiticity > 1e-10) fail("hermiticity", v.hermiticity);
  if (v.trace > 1e-10) fail("trace", v.trace);
  if (v.antisymmetry > 1e-10) fail("antisymmetry", v.antisymmetry);
  if (v.partial_trace > 1e-10) fail("partial trace", v.partial_trace);
  if (v.occupation_bounds > 1e-9) fail("occupation bound", v.occupation_bounds);
}

FullSpaceRdm::FullSpaceRdm(const ReducedDensityMatrices& act, const ActiveSpace& cas,
                           int n_orb)
    : n_(n_orb), cas_(cas), cls_(cas.classes(n_orb)), act_pos_(n_orb, -1) {
  na_ = cas.n_act();
  if (act.n_act != na_) throw DomainError("RDM size does not match the active space");
  for (int k = 0; k < na_; ++k) act_pos_[cas.active[k]] = k;
  const Mat da = act.D1();
  d1_ = Mat::Zero(n_, n_);
  for (int i : cas.inactive) d1_(i, i) = 2.0;
  for (int t = 0; t < na_; ++t)
    for (int u = 0; u < na_; ++u) d1_(cas.active[t], cas.active[u]) = da(t, u);
  d2_act_ = act.D2();
}

double FullSpaceRdm::D2(int p, int q, int r, int s) const {
  const int cp = cls_[p], cq = cls_[q], cr = cls_[r], cs = cls_[s];
  if (cp == 2 || cq == 2 || cr == 2 || cs == 2) return 0.0;
  if (cp == 1 && cq == 1 && cr == 1 && cs == 1) {
    const std::size_t n = std::size_t(na_);
    return d2_act_[((std::size_t(act_pos_[p]) * n + act_pos_[q]) * n + act_pos_[r]) * n +
                   act_pos_[s]];
  }
  auto dc = [&](int a, int b) { return (a == b && cls_[a] == 0) ? 2.0 : 0.0; };
  auto da = [&](int a, int b) {
    return (cls_[a] == 1 && cls_[b] == 1) ? d1_(a, b) : 0.0;
  };
  return dc(p, r) * da(q, s) + da(p, r) * dc(q, s) - 0.5 * dc(p, s) * da(q, r) -
         0.5 * da(p, s) * dc(q, r) + dc(p, r) * dc(q, s) - 0.5 * dc(p, s) * dc(q, r);
}

std::vector<double> FullSpaceRdm::D2_dense() const {
  const std::size_t n = std::size_t(n_);
  std::vector<double> d(n * n * n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          d[((p * n + q) * n + r) * n + s] = D2(int(p), int(q), int(r), int(s));
  return d;
}

double energy_from_full_rdms(const FullSpaceRdm& rdm, const IntegralSet& ints) {
  const int n = ints.n_orb;
  if (rdm.n_orb() != n) throw DomainError("RDM / integral size mismatch");
  double e = ints.core_energy + (ints.h.array() * rdm.D1().array()).sum();
  double two = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double d = rdm.D2(p, q, r, s);
          if (d != 0.0) two += ints.v(p, r, q, s) * d;
        }
  return e + 0.5 * two;
}

ReducedDensityMatrices transform_rdms(const ReducedDensityMatrices& rdm, const Mat& u) {
  const int n = rdm.n_act, N = 2 * n;
  if (u.rows() != n || u.cols() != n) throw DomainError("rotation size mismatch");
  Mat U = Mat::Zero(N, N);
  for (int r = 0; r < n; ++r)
    for (int p = 0; p < n; ++p) {
      U(2 * r, 2 * p) = u(r, p);
      U(2 * r + 1, 2 * p + 1) = u(r, p);
    }
  ReducedDensityMatrices out = rdm;
  out.gamma = U.transpose() * rdm.gamma * U;
  out.Gamma = transform_eri_dense(N, rdm.Gamma, U);
  return out;
}

void dump_rdms(const ReducedDensityMatrices& rdm, std::ostream& os) {
  const int N = rdm.n_spin();
  char buf[128];
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      if (rdm.gamma(p, q) != 0.0) {
        std::snprintf(buf, sizeof buf, "%d %d %.12e\n", p, q, rdm.gamma(p, q));
        os << buf;
      }
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s)
          if (rdm.G(p, q, r, s) != 0.0) {
            std::snprintf(buf, sizeof buf, "%d %d %d %d %.12e\n", p, q, r, s,
                          rdm.G(p, q, r, s));
            os << buf;
          }
}

}  // namespace vqeac
