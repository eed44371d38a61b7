// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/ac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vqeac/errors.hpp"

namespace vqeac {

const char* to_string(ErpaBlock b) {
  switch (b) {
    case ErpaBlock::active_active: return "active-active";
    case ErpaBlock::active_inactive: return "active-inactive";
    case ErpaBlock::virtual_active: return "virtual-active";
    case ErpaBlock::virtual_inactive: return "virtual-inactive";
    default: return "full";
  }
}

NaturalOrbitals natural_orbital_basis(const Mat& d1) {
  const Mat sym = 0.5 * (d1 + d1.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("1-RDM diagonalization failed");
  const Eigen::Index n = sym.rows();
  NaturalOrbitals out;
  out.rotation.resize(n, n);
  out.occupations.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec col = es.eigenvectors().col(n - 1 - k);
    Eigen::Index big = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(col(i)) > std::abs(col(big)) + 1e-12) big = i;
    if (col(big) < 0) col = -col;
    out.rotation.col(k) = col;
    out.occupations(k) = es.eigenvalues()(n - 1 - k);
  }
  return out;
}

AcReference make_ac_reference(const IntegralSet& ints, const ActiveSpace& cas,
                              const ReducedDensityMatrices& rdms, const AcOptions& opt) {
  cas.validate(ints);
  if (rdms.n_act != cas.n_act()) throw DomainError("RDM size differs from the active space");
  const int n = ints.n_orb, na = cas.n_act();
  AcReference ref;
  ref.n_orb = n;
  ref.n_so = 2 * n;
  ref.cas = cas;

  // The singlet ERPA channel depends on spin-summed RDMs only; averaging over
  // the alpha <-> beta exchange keeps D1 and D2 and makes the natural spin
  // orbitals of both spins coincide.
  ReducedDensityMatrices avg = rdms;
  {
    const std::size_t S = std::size_t(2 * na);
    for (std::size_t p = 0; p < S; ++p)
      for (std::size_t q = 0; q < S; ++q)
        avg.gamma(p, q) = 0.5 * (rdms.gamma(p, q) + rdms.gamma(p ^ 1, q ^ 1));
    for (std::size_t p = 0; p < S; ++p)
      for (std::size_t q = 0; q < S; ++q)
        for (std::size_t r = 0; r < S; ++r)
          for (std::size_t s = 0; s < S; ++s)
            avg.Gamma[((p * S + q) * S + r) * S + s] =
                0.5 * (rdms.Gamma[((p * S + q) * S + r) * S + s] +
                       rdms.Gamma[(((p ^ 1) * S + (q ^ 1)) * S + (r ^ 1)) * S + (s ^ 1)]);
  }
  const NaturalOrbitals no = natural_orbital_basis(avg.D1());
  ref.active_rotation = no.rotation;
  Mat u = Mat::Identity(n, n);
  for (int r = 0; r < na; ++r)
    for (int p = 0; p < na; ++p) u(cas.active[r], cas.active[p]) = no.rotation(r, p);
  ref.ints = transform_orbitals(ints, u);
  const ReducedDensityMatrices act = transform_rdms(avg, no.rotation);

  double off = 0.0;
  for (int p = 0; p < 2 * na; ++p)
    for (int q = 0; q < 2 * na; ++q)
      if (p != q) off = std::max(off, std::abs(act.gamma(p, q)));
  if (off > opt.offdiagonal_tolerance)
    throw DomainError("1-RDM is not diagonal in natural spin orbitals (off-diagonal " +
                      std::to_string(off) + ")");

  const auto cls = cas.classes(n);
  for (int p = 0; p < n; ++p) ref.group.push_back(OrbitalGroup(cls[p]));

  const int N = ref.n_so;
  std::vector<int> so_map(2 * na);
  for (int k = 0; k < na; ++k) {
    so_map[2 * k] = 2 * cas.active[k];
    so_map[2 * k + 1] = 2 * cas.active[k] + 1;
  }
  Mat ga = Mat::Zero(N, N), gc = Mat::Zero(N, N);
  for (int p = 0; p < 2 * na; ++p)
    for (int q = 0; q < 2 * na; ++q) ga(so_map[p], so_map[q]) = act.gamma(p, q);
  for (int i : cas.inactive) {
    gc(2 * i, 2 * i) = 1.0;
    gc(2 * i + 1, 2 * i + 1) = 1.0;
  }
  ref.gamma = ga + gc;
  ref.occupation = ref.gamma.diagonal();

  const std::size_t M = std::size_t(N);
  ref.Gamma.assign(M * M * M * M, 0.0);
  auto at = [M](int p, int q, int r, int s) {
    return ((std::size_t(p) * M + q) * M + r) * M + s;
  };
  const std::size_t A = std::size_t(2 * na);
  for (std::size_t p = 0; p < A; ++p)
    for (std::size_t q = 0; q < A; ++q)
      for (std::size_t r = 0; r < A; ++r)
        for (std::size_t s = 0; s < A; ++s)
          ref.Gamma[at(so_map[p], so_map[q], so_map[r], so_map[s])] =
              act.Gamma[((p * A + q) * A + r) * A + s];
  // Product of a closed-shell core and the active state.
  std::vector<int> core_so;
  for (int i : cas.inactive) {
    core_so.push_back(2 * i);
    core_so.push_back(2 * i + 1);
  }
  for (int i : core_so)
    for (int j : core_so)
      if (i != j) {
        ref.Gamma[at(i, j, i, j)] += 1.0;
        ref.Gamma[at(i, j, j, i)] -= 1.0;
      }
  for (int i : core_so)
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q) {
        const double g = ga(p, q);
        if (g == 0.0) continue;
        ref.Gamma[at(i, p, i, q)] += g;
        ref.Gamma[at(p, i, q, i)] += g;
        ref.Gamma[at(i, p, q, i)] -= g;
        ref.Gamma[at(p, i, i, q)] -= g;
      }

  const FullSpaceRdm full(act, cas, n);
  ref.reference_energy = energy_from_full_rdms(full, ref.ints);
  return ref;
}

namespace {

Mat spin_summed(const Mat& gamma, int n) {
  Mat d(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      d(p, q) = gamma(2 * p, 2 * q) + gamma(2 * p + 1, 2 * q + 1);
  return d;
}

}  // namespace

AlphaHamiltonian zeroth_order_hamiltonian(const AcReference& ref) {
  const int n = ref.n_orb;
  const std::size_t m = std::size_t(n);
  const Mat d = spin_summed(ref.gamma, n);
  const auto v = ref.ints.v.dense();
  auto g = [&](int p) { return int(ref.group[p]); };
  AlphaHamiltonian h0;
  h0.alpha = 0.0;
  h0.h = Mat::Zero(n, n);
  h0.v.assign(v.size(), 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (g(p) != g(q)) continue;
      double f = ref.ints.h(p, q);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          if (g(r) == g(p) || g(s) != g(r) || d(r, s) == 0.0) continue;
          f += d(r, s) * (v[((p * m + q) * m + r) * m + s] -
                          0.5 * v[((p * m + s) * m + r) * m + q]);
        }
      h0.h(p, q) = f;
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          if (g(p) == g(q) && g(q) == g(r) && g(r) == g(s)) {
            const std::size_t k = ((p * m + q) * m + r) * m + s;
            h0.v[k] = v[k];
          }
  return h0;
}

AlphaHamiltonian alpha_hamiltonian(const AcReference& ref, double alpha) {
  AlphaHamiltonian h = zeroth_order_hamiltonian(ref);
  const auto v = ref.ints.v.dense();
  h.alpha = alpha;
  h.h += alpha * (ref.ints.h - h.h);
  for (std::size_t k = 0; k < v.size(); ++k) h.v[k] += alpha * (v[k] - h.v[k]);
  return h;
}

std::vector<ErpaPair> erpa_pairs(const AcReference& ref, ErpaBlock block,
                                 std::vector<DroppedPair>* dropped, double threshold) {
  const ErpaBlock order[] = {ErpaBlock::active_active, ErpaBlock::active_inactive,
                             ErpaBlock::virtual_active, ErpaBlock::virtual_inactive};
  auto block_of = [&](int a, int b) {
    int ga = int(ref.group[a]), gb = int(ref.group[b]);
    if (ga > gb) std::swap(ga, gb);
    if (ga == 1 && gb == 1) return ErpaBlock::active_active;
    if (ga == 0 && gb == 1) return ErpaBlock::active_inactive;
    if (ga == 1 && gb == 2) return ErpaBlock::virtual_active;
    if (ga == 0 && gb == 2) return ErpaBlock::virtual_inactive;
    return ErpaBlock::full;  // intra-group inactive or virtual: never coupled
  };
  std::vector<ErpaPair> out;
  for (ErpaBlock b : order) {
    if (block != ErpaBlock::full && block != b) continue;
    for (int a = 0; a < ref.n_orb; ++a)
      for (int c = a + 1; c < ref.n_orb; ++c) {
        if (block_of(a, c) != b) continue;
        for (int s = 0; s < 2; ++s) {
          int p = 2 * a + s, q = 2 * c + s;
          if (ref.occupation(p) > ref.occupation(q)) std::swap(p, q);
          const double m = ref.occupation(q) - ref.occupation(p);
          if (m < threshold) {
            if (dropped) dropped->push_back({p, q, m});
            continue;
          }
          out.push_back({p, q, m, b});
        }
      }
  }
  return out;
}

DoubleCommutator::DoubleCommutator(const AcReference& ref, const Mat& h,
                                   const std::vector<double>& v)
    : n_(ref.n_so), gamma_(ref.gamma), Gamma_(&ref.Gamma) {
  const int n = ref.n_orb;
  const std::size_t N = std::size_t(n_), m = std::size_t(n);
  h_so_ = Mat::Zero(n_, n_);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      h_so_(2 * p, 2 * q) = h(p, q);
      h_so_(2 * p + 1, 2 * q + 1) = h(p, q);
    }
  // <PQ|RS> = (pr|qs) for matching spins.
  v_so_.assign(N * N * N * N, 0.0);
  for (std::size_t P = 0; P < N; ++P)
    for (std::size_t Q = 0; Q < N; ++Q)
      for (std::size_t R = P % 2; R < N; R += 2)
        for (std::size_t S = Q % 2; S < N; S += 2)
          v_so_[((P * N + Q) * N + R) * N + S] =
              v[(((P / 2) * m + R / 2) * m + Q / 2) * m + S / 2];

  yh_[0] = h_so_ * gamma_.transpose();
  yh_[1] = h_so_.transpose() * gamma_;
  const std::size_t st[4] = {N * N * N, N * N, N, 1};
  const auto& G = *Gamma_;
  for (int k = 0; k < 4; ++k) {
    Mat vk(n_, N * N * N), gk(n_, N * N * N);
    int o[3], c = 0;
    for (int j = 0; j < 4; ++j)
      if (j != k) o[c++] = j;
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          for (std::size_t l = 0; l < N; ++l) {
            const std::size_t idx = a * st[k] + i * st[o[0]] + j * st[o[1]] + l * st[o[2]];
            const Eigen::Index col = Eigen::Index((i * N + j) * N + l);
            vk(Eigen::Index(a), col) = v_so_[idx];
            gk(Eigen::Index(a), col) = G[idx];
          }
    yv_[k] = vk * gk.transpose();
  }
}

namespace {

struct Sub {
  double s;
  int f, t;
};

// Action of ad*_e on tensor position k of a normal-ordered product with
// `n_create` creator positions.
Sub sub_for(std::pair<int, int> e, int k, int n_create) {
  if (k < n_create) return {-1.0, e.second, e.first};
  return {1.0, e.first, e.second};
}

}  // namespace

double DoubleCommutator::nested(std::pair<int, int> x, std::pair<int, int> y) const {
  const std::size_t N = std::size_t(n_);
  double one = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const Sub sx = sub_for(x, k, 1), sy = sub_for(y, l, 1);
      if (k == l) {
        if (sx.t == sy.f) one += sx.s * sy.s * yh_[k](sx.f, sy.t);
      } else {
        int I[2], J[2];
        I[k] = sx.f;
        I[l] = sy.f;
        J[k] = sx.t;
        J[l] = sy.t;
        one += sx.s * sy.s * h_so_(I[0], I[1]) * gamma_(J[0], J[1]);
      }
    }
  const std::size_t st[4] = {N * N * N, N * N, N, 1};
  const auto& G = *Gamma_;
  double two = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      const Sub sx = sub_for(x, k, 2), sy = sub_for(y, l, 2);
      if (k == l) {
        if (sx.t == sy.f) two += sx.s * sy.s * yv_[k](sx.f, sy.t);
        continue;
      }
      int free_pos[2], c = 0;
      for (int j = 0; j < 4; ++j)
        if (j != k && j != l) free_pos[c++] = j;
      const std::size_t vb = sx.f * st[k] + sy.f * st[l];
      const std::size_t gb = sx.t * st[k] + sy.t * st[l];
      const std::size_t s1 = st[free_pos[0]], s2 = st[free_pos[1]];
      double acc = 0.0;
      for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
          const std::size_t off = a * s1 + b * s2;
          acc += v_so_[vb + off] * G[gb + off];
        }
      two += sx.s * sy.s * acc;
    }
  return one + 0.5 * two;
}

double DoubleCommutator::symmetric(std::pair<int, int> a, std::pair<int, int> b) const {
  return -0.5 * (nested(b, a) + nested(a, b));
}

namespace {

// Reduced ERPA quantities for metric-scaled A, B:
// P = A + B, M = A - B, G = P^1/2 M P^1/2 = V diag(lambda) V^T and
// S = P^1/2 G^-1/2 P^1/2 = sum over roots of (x - y)(x - y)^T, so S M S = P.
struct Response {
  Mat p_half, p_inv_half, V, S;
  Vec lambda;
};

Response response(const Mat& At, const Mat& Bt, const char* label) {
  Response r;
  const Eigen::Index m = At.rows();
  if (m == 0) {
    r.p_half = r.p_inv_half = r.V = r.S = Mat(0, 0);
    r.lambda = Vec(0);
    return r;
  }
  const Mat P = At + Bt, M = At - Bt;
  Eigen::SelfAdjointEigenSolver<Mat> ep(0.5 * (P + P.transpose()));
  if (ep.info() != Eigen::Success)
    throw NumericalError(std::string("ERPA eigensolver failed in block ") + label);
  if (ep.eigenvalues().minCoeff() <= 0.0)
    throw NumericalError(std::string("ERPA instability in block ") + label +
                         ": A + B is not positive definite");
  const Vec sq = ep.eigenvalues().cwiseSqrt();
  r.p_half = ep.eigenvectors() * sq.asDiagonal() * ep.eigenvectors().transpose();
  r.p_inv_half = ep.eigenvectors() * sq.cwiseInverse().asDiagonal() *
                 ep.eigenvectors().transpose();
  const Mat G = r.p_half * M * r.p_half;
  Eigen::SelfAdjointEigenSolver<Mat> eg(0.5 * (G + G.transpose()));
  if (eg.info() != Eigen::Success)
    throw NumericalError(std::string("ERPA eigensolver failed in block ") + label);
  r.lambda = eg.eigenvalues();
  r.V = eg.eigenvectors();
  if (r.lambda.minCoeff() < 0.0 && std::sqrt(-r.lambda.minCoeff()) > 1e-8)
    throw NumericalError(std::string("ERPA instability in block ") + label +
                         ": complex excitation energy");
  if (r.lambda.minCoeff() < 1e-16)
    throw NumericalError(std::string("ERPA instability in block ") + label +
                         ": zero excitation energy");
  r.S = r.p_half * r.V * r.lambda.cwiseSqrt().cwiseInverse().asDiagonal() * r.V.transpose() *
        r.p_half;
  return r;
}

// Metric-scaled copy N^-1/2 X N^-1/2.
Mat scaled(const Mat& x, const Vec& metric) {
  const Vec s = metric.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * x * s.asDiagonal();
}

// Pair-pair integrals (p_P q_P | p_Q q_Q), zero when all four indices are active.
Mat pair_integrals(const AcReference& ref, const std::vector<ErpaPair>& pairs) {
  const Eigen::Index m = Eigen::Index(pairs.size());
  Mat K(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto &P = pairs[i], &Q = pairs[j];
      if (P.block == ErpaBlock::active_active && Q.block == ErpaBlock::active_active) {
        K(i, j) = 0.0;
        continue;
      }
      K(i, j) = ref.ints.v(P.p / 2, P.q / 2, Q.p / 2, Q.q / 2);
    }
  return K;
}

// Singlet combinations (P_alpha + P_beta) / sqrt(2) of pairs listed in
// alpha, beta order. Triplet combinations have vanishing spin-summed
// transition densities and carry no correlation energy.
Mat singlet_projector(const std::vector<ErpaPair>& pairs) {
  const std::size_t m = pairs.size();
  if (m % 2) throw DomainError("spin-orbital ERPA pairs are not spin-paired");
  Mat T = Mat::Zero(Eigen::Index(m), Eigen::Index(m / 2));
  for (std::size_t k = 0; k < m / 2; ++k) {
    const auto &a = pairs[2 * k], &b = pairs[2 * k + 1];
    if (a.p / 2 != b.p / 2 || a.q / 2 != b.q / 2 || a.p % 2 != 0 || b.p % 2 != 1)
      throw DomainError("spin-orbital ERPA pairs are not spin-paired");
    T(Eigen::Index(2 * k), Eigen::Index(k)) = T(Eigen::Index(2 * k + 1), Eigen::Index(k)) =
        std::sqrt(0.5);
  }
  return T;
}

// Singlet-channel ERPA quantities in metric-scaled form.
struct Channel {
  std::vector<ErpaBlock> blocks;  // per singlet pair
  Mat T, A, B;
  Mat K;  // T^T N^1/2 K N^1/2 T
};

Channel singlet_channel(const AcReference& ref, const ErpaBlockProblem& pb) {
  Channel c;
  c.T = singlet_projector(pb.pairs);
  for (std::size_t k = 0; k < pb.pairs.size(); k += 2) c.blocks.push_back(pb.pairs[k].block);
  c.A = c.T.transpose() * scaled(pb.A, pb.metric) * c.T;
  c.B = c.T.transpose() * scaled(pb.B, pb.metric) * c.T;
  const Vec nh = pb.metric.cwiseSqrt();
  c.K = c.T.transpose() * nh.asDiagonal() * pair_integrals(ref, pb.pairs) * nh.asDiagonal() *
        c.T;
  return c;
}

ErpaBlockProblem assemble(const AcReference& ref, const AlphaHamiltonian& ham,
                          std::vector<ErpaPair> pairs, ErpaBlock block) {
  ErpaBlockProblem pb;
  pb.block = block;
  pb.occupation = ref.occupation;
  pb.pairs = std::move(pairs);
  const Eigen::Index m = Eigen::Index(pb.pairs.size());
  pb.metric.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) pb.metric(i) = pb.pairs[i].metric;
  pb.A = Mat::Zero(m, m);
  pb.B = Mat::Zero(m, m);
  if (m == 0) return pb;
  const DoubleCommutator dc(ref, ham.h, ham.v);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& P = pb.pairs[i];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& R = pb.pairs[j];
      pb.A(i, j) = pb.A(j, i) = dc.symmetric({P.q, P.p}, {R.p, R.q});
      pb.B(i, j) = pb.B(j, i) = dc.symmetric({P.q, P.p}, {R.q, R.p});
    }
  }
  return pb;
}

const ErpaBlock kBlocks[] = {ErpaBlock::active_active, ErpaBlock::active_inactive,
                             ErpaBlock::virtual_active, ErpaBlock::virtual_inactive};

// Row-wise attribution of sum_PQ C_PQ to the block of P.
void attribute(const Mat& C, const std::vector<ErpaBlock>& rows, ACResult& res) {
  for (auto& b : res.blocks) b.energy = 0.0;
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (auto& b : res.blocks)
      if (b.block == rows[std::size_t(i)]) b.energy += C.row(i).sum();
  res.e_corr = 0.0;
  for (const auto& b : res.blocks) res.e_corr += b.energy;
  res.total_energy = res.reference_energy + res.e_corr;
}

struct FullErpa {
  std::vector<DroppedPair> dropped;
  std::vector<ErpaPair> pairs;
  Channel c0, c1;
};

FullErpa full_erpa(const AcReference& ref, const AcOptions& opt) {
  FullErpa f;
  const ErpaBlockProblem p0 =
      build_erpa_block(ref, zeroth_order_hamiltonian(ref), ErpaBlock::full, opt);
  f.dropped = p0.dropped;
  f.pairs = p0.pairs;
  f.c0 = singlet_channel(ref, p0);
  f.c1 = singlet_channel(ref, assemble(ref, alpha_hamiltonian(ref, 1.0), p0.pairs,
                                       ErpaBlock::full));
  return f;
}

Mat integrand_terms(const FullErpa& f, const Mat& S0, double alpha) {
  const Response r = response(f.c0.A + alpha * (f.c1.A - f.c0.A),
                              f.c0.B + alpha * (f.c1.B - f.c0.B), "full");
  return 0.5 * f.c0.K.cwiseProduct(r.S - S0);
}

void log_dropped(const AcReference& ref, const std::vector<DroppedPair>& all,
                 std::vector<DroppedPair>& out) {
  for (const auto& d : all)
    if (ref.group[d.p / 2] == OrbitalGroup::active || ref.group[d.q / 2] == OrbitalGroup::active)
      out.push_back(d);
}

ACResult start_result(const AcReference& ref, const char* method, const AcOptions& opt) {
  ACResult res;
  res.method = method;
  res.reference_energy = ref.reference_energy;
  for (ErpaBlock b : kBlocks) res.blocks.push_back({b, 0, 0.0, false});
  if (!opt.orbital_optimized)
    res.warnings.push_back("reference orbitals are not optimized; AC corrections may degrade");
  return res;
}

}  // namespace

ErpaBlockProblem build_erpa_block(const AcReference& ref, const AlphaHamiltonian& ham,
                                  ErpaBlock block, const AcOptions& opt) {
  std::vector<DroppedPair> dropped;
  auto pairs = erpa_pairs(ref, block, &dropped, opt.degeneracy_threshold);
  ErpaBlockProblem pb = assemble(ref, ham, std::move(pairs), block);
  pb.dropped = std::move(dropped);
  return pb;
}

TransitionDensitySet solve_erpa(const ErpaBlockProblem& problem) {
  TransitionDensitySet t;
  t.block = problem.block;
  const Eigen::Index m = Eigen::Index(problem.pairs.size());
  if (m == 0) {
    t.omega = Vec(0);
    t.X = t.Y = t.down = t.up = Mat(0, 0);
    return t;
  }
  const Mat T = singlet_projector(problem.pairs);
  const Response r = response(T.transpose() * scaled(problem.A, problem.metric) * T,
                              T.transpose() * scaled(problem.B, problem.metric) * T,
                              to_string(problem.block));
  const Eigen::Index nk = r.lambda.size();
  t.omega = r.lambda.cwiseSqrt();
  t.X.resize(m, nk);
  t.Y.resize(m, nk);
  const Vec ninv = problem.metric.cwiseSqrt().cwiseInverse();
  for (Eigen::Index c = 0; c < nk; ++c) {
    const double w = t.omega(c);
    const Vec z = r.V.col(c);
    const Vec xpy = T * (r.p_inv_half * z * std::sqrt(w));
    const Vec xmy = T * (r.p_half * z / std::sqrt(w));
    t.X.col(c) = ninv.cwiseProduct(0.5 * (xpy + xmy));
    t.Y.col(c) = ninv.cwiseProduct(0.5 * (xpy - xmy));
  }
  t.down = problem.metric.asDiagonal() * t.X;
  t.up = -(problem.metric.asDiagonal() * t.Y);
  return t;
}

ACResult ac0_correction(const IntegralSet& ints, const ActiveSpace& cas,
                        const ReducedDensityMatrices& rdms, const AcOptions& opt) {
  const AcReference ref = make_ac_reference(ints, cas, rdms, opt);
  ACResult res = start_result(ref, "AC0", opt);
  const AlphaHamiltonian h0 = zeroth_order_hamiltonian(ref);

  // Zeroth-order block solutions.
  std::vector<ErpaPair> pairs;
  std::vector<Channel> chans;
  std::vector<Response> resp;
  for (std::size_t b = 0; b < 4; ++b) {
    const ErpaBlockProblem pb = build_erpa_block(ref, h0, kBlocks[b], opt);
    log_dropped(ref, pb.dropped, res.dropped);
    res.blocks[b].n_pairs = int(pb.pairs.size());
    if (pb.pairs.empty()) continue;
    Channel c = singlet_channel(ref, pb);
    try {
      resp.push_back(response(c.A, c.B, to_string(kBlocks[b])));
    } catch (const NumericalError& e) {
      res.blocks[b].skipped = true;
      res.warnings.push_back(e.what());
      continue;
    }
    chans.push_back(std::move(c));
    pairs.insert(pairs.end(), pb.pairs.begin(), pb.pairs.end());
  }
  if (pairs.empty()) {
    attribute(Mat(0, 0), {}, res);
    return res;
  }

  const Channel c1 = singlet_channel(
      ref, assemble(ref, alpha_hamiltonian(ref, 1.0), pairs, ErpaBlock::full));
  const Eigen::Index m = c1.A.rows();
  Mat ph = Mat::Zero(m, m), pih = Mat::Zero(m, m), V = Mat::Zero(m, m), S0 = Mat::Zero(m, m);
  Mat P0 = Mat::Zero(m, m), M0 = Mat::Zero(m, m);
  Vec lambda(m);
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < resp.size(); ++b) {
    const Response& r = resp[b];
    const Eigen::Index k = r.lambda.size();
    ph.block(off, off, k, k) = r.p_half;
    pih.block(off, off, k, k) = r.p_inv_half;
    V.block(off, off, k, k) = r.V;
    S0.block(off, off, k, k) = r.S;
    P0.block(off, off, k, k) = chans[b].A + chans[b].B;
    M0.block(off, off, k, k) = chans[b].A - chans[b].B;
    lambda.segment(off, k) = r.lambda;
    off += k;
  }

  // First-order change of S from S M S = P.
  const Mat dP = (c1.A + c1.B) - P0, dM = (c1.A - c1.B) - M0;
  const Mat R = dP - S0 * dM * S0;
  Mat Q = V.transpose() * pih * R * pih * V;
  const Vec sl = lambda.cwiseSqrt();
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) Q(i, j) /= sl(i) + sl(j);
  const Mat dS = ph * V * Q * V.transpose() * ph;
  attribute(0.25 * c1.K.cwiseProduct(dS), c1.blocks, res);
  return res;
}

double ac_integrand(const AcReference& ref, double alpha, const AcOptions& opt) {
  const FullErpa f = full_erpa(ref, opt);
  if (f.pairs.empty()) return 0.0;
  const Mat S0 = response(f.c0.A, f.c0.B, "full").S;
  return integrand_terms(f, S0, alpha).sum();
}

void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  nodes = (es.eigenvalues().array() + 1.0) * 0.5;
  weights = es.eigenvectors().row(0).transpose().array().square();
}

ACResult ac_correction(const IntegralSet& ints, const ActiveSpace& cas,
                       const ReducedDensityMatrices& rdms, const AcOptions& opt) {
  const AcReference ref = make_ac_reference(ints, cas, rdms, opt);
  ACResult res = start_result(ref, "AC", opt);
  res.quadrature_nodes = opt.quadrature_nodes;
  const FullErpa f = full_erpa(ref, opt);
  log_dropped(ref, f.dropped, res.dropped);
  for (const auto& p : f.pairs)
    for (auto& b : res.blocks)
      if (b.block == p.block) ++b.n_pairs;
  if (f.pairs.empty()) {
    attribute(Mat(0, 0), {}, res);
    return res;
  }
  const Mat S0 = response(f.c0.A, f.c0.B, "full").S;
  Vec x, w;
  gauss_legendre(opt.quadrature_nodes, x, w);
  Mat C = Mat::Zero(f.c0.K.rows(), f.c0.K.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) C += w(k) * integrand_terms(f, S0, x(k));
  attribute(C, f.c0.blocks, res);
  return res;
}

nlohmann::json to_json(const ACResult& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"block", to_string(b.block)},
                      {"n_pairs", b.n_pairs},
                      {"energy", b.energy},
                      {"skipped", b.skipped}});
  nlohmann::json dropped = nlohmann::json::array();
  for (const auto& d : r.dropped)
    dropped.push_back({{"p", d.p}, {"q", d.q}, {"metric", d.metric}});
  nlohmann::json out = {{"method", r.method},
                        {"reference_energy", r.reference_energy},
                        {"e_corr", r.e_corr},
                        {"total_energy", r.total_energy},
                        {"blocks", blocks},
                        {"dropped_pairs", dropped},
                        {"warnings", r.warnings}};
  if (r.method == "AC")
    out["grid"] = {{"rule", "gauss-legendre"}, {"nodes", r.quadrature_nodes}};
  return out;
}

}  // namespace vqeac
