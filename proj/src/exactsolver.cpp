// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/exactsolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "vqeac/errors.hpp"

namespace vqeac {

namespace {

std::vector<std::uint64_t> strings(int n, int k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v)
    if (std::popcount(v) == k) out.push_back(v);
  return out;
}

std::vector<std::vector<DeterminantSpace::Replacement>> replacements(
    int n, const std::vector<std::uint64_t>& strs) {
  std::vector<std::int64_t> index(std::size_t(1) << n, -1);
  for (std::size_t k = 0; k < strs.size(); ++k) index[strs[k]] = std::int64_t(k);
  std::vector<std::vector<DeterminantSpace::Replacement>> out(strs.size());
  for (std::size_t k = 0; k < strs.size(); ++k) {
    const std::uint64_t s = strs[k];
    for (int q = 0; q < n; ++q) {
      if (!(s >> q & 1)) continue;
      for (int p = 0; p < n; ++p) {
        std::uint64_t t = s;
        double sg = 1.0;
        apply_ladder(t, q, false, sg);
        if (!apply_ladder(t, p, true, sg)) continue;
        out[k].push_back({std::uint32_t(index[t]), std::uint16_t(p * n + q),
                          std::int8_t(sg > 0 ? 1 : -1)});
      }
    }
  }
  return out;
}

}  // namespace

DeterminantSpace::DeterminantSpace(int n_orb, int n_alpha, int n_beta)
    : n_(n_orb), na_(n_alpha), nb_(n_beta) {
  if (n_orb < 0 || n_orb > 31) throw SizeError("orbital count outside determinant limits");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb)
    throw DomainError("electron counts do not fit the orbitals");
  alpha_ = strings(n_orb, n_alpha);
  beta_ = strings(n_orb, n_beta);
  ra_ = replacements(n_orb, alpha_);
  rb_ = replacements(n_orb, beta_);
}

std::uint64_t DeterminantSpace::occupation(std::size_t I, double& sign) const {
  const std::uint64_t a = alpha_[I / beta_.size()], b = beta_[I % beta_.size()];
  std::uint64_t occ = 0;
  // Reordering alpha-major creators into ascending interleaved order costs
  // one transposition per (alpha p, beta q) pair with p > q.
  int swaps = 0;
  for (int p = 0; p < n_; ++p) {
    if (a >> p & 1) {
      occ |= std::uint64_t(1) << (2 * p);
      swaps += std::popcount(b & ((std::uint64_t(1) << p) - 1));
    }
    if (b >> p & 1) occ |= std::uint64_t(1) << (2 * p + 1);
  }
  sign = (swaps & 1) ? -1.0 : 1.0;
  return occ;
}

Vec fci_diagonal(const EmbeddedHamiltonian& emb, const DeterminantSpace& space) {
  const int n = space.n_orb();
  const auto& A = space.alpha_strings();
  const auto& B = space.beta_strings();
  auto one_string = [&](std::uint64_t s) {
    double e = 0.0;
    for (int p = 0; p < n; ++p) {
      if (!(s >> p & 1)) continue;
      e += emb.h_eff(p, p);
      for (int q = 0; q < p; ++q)
        if (s >> q & 1) e += emb.v_act(p, p, q, q) - emb.v_act(p, q, q, p);
    }
    return e;
  };
  Vec ea(A.size()), eb(B.size());
  for (std::size_t i = 0; i < A.size(); ++i) ea(i) = one_string(A[i]);
  for (std::size_t i = 0; i < B.size(); ++i) eb(i) = one_string(B[i]);
  Vec d(space.dim());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) {
      double c = 0.0;
      for (int p = 0; p < n; ++p)
        if (A[i] >> p & 1)
          for (int q = 0; q < n; ++q)
            if (B[j] >> q & 1) c += emb.v_act(p, p, q, q);
      d(i * B.size() + j) = emb.e_core + ea(i) + eb(j) + c;
    }
  return d;
}

Vec fci_sigma(const EmbeddedHamiltonian& emb, const DeterminantSpace& space, const Vec& c) {
  const int n = space.n_orb();
  const int n2 = n * n;
  const std::size_t nA = space.alpha_strings().size(), nB = space.beta_strings().size();
  const std::size_t dim = space.dim();
  // k_pq = h_pq - 1/2 sum_r (pr|rq)
  Mat kmat = emb.h_eff;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) kmat(p, q) -= 0.5 * emb.v_act(p, r, r, q);
  Mat eri(n2, n2);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) eri(p * n + q, r * n + s) = 0.5 * emb.v_act(p, q, r, s);

  // D(I, pq) = <I|E_pq|c>, built by scattering from each source determinant.
  Mat D = Mat::Zero(Eigen::Index(dim), n2);
  const auto& RA = space.alpha_replacements();
  const auto& RB = space.beta_replacements();
  for (std::size_t ia = 0; ia < nA; ++ia)
    for (const auto& r : RA[ia])
      for (std::size_t ib = 0; ib < nB; ++ib)
        D(Eigen::Index(r.target * nB + ib), r.pq) += r.sign * c(Eigen::Index(ia * nB + ib));
  for (std::size_t ia = 0; ia < nA; ++ia)
    for (std::size_t ib = 0; ib < nB; ++ib) {
      const double v = c(Eigen::Index(ia * nB + ib));
      if (v == 0.0) continue;
      for (const auto& r : RB[ib])
        D(Eigen::Index(ia * nB + r.target), r.pq) += r.sign * v;
    }
  // G(I, pq) = sum_rs 1/2 (pq|rs) D(I, rs)
  const Mat G = D * eri;  // eri symmetric
  Vec sigma = emb.e_core * c;
  for (int pq = 0; pq < n2; ++pq) sigma += kmat(pq / n, pq % n) * D.col(pq);
  // sigma(J) += sum_pq <J|E_pq|I> G(I, pq)
  for (std::size_t ia = 0; ia < nA; ++ia)
    for (const auto& r : RA[ia])
      for (std::size_t ib = 0; ib < nB; ++ib)
        sigma(Eigen::Index(r.target * nB + ib)) += r.sign * G(Eigen::Index(ia * nB + ib), r.pq);
  for (std::size_t ia = 0; ia < nA; ++ia)
    for (std::size_t ib = 0; ib < nB; ++ib)
      for (const auto& r : RB[ib])
        sigma(Eigen::Index(ia * nB + r.target)) += r.sign * G(Eigen::Index(ia * nB + ib), r.pq);
  return sigma;
}

FciResult fci_solve(const EmbeddedHamiltonian& emb, int n_alpha, int n_beta,
                    const FciOptions& opt) {
  const DeterminantSpace space(emb.n_act, n_alpha, n_beta);
  const std::size_t dim = space.dim();
  if (dim > opt.max_dim)
    throw SizeError("determinant space of dimension " + std::to_string(dim) +
                    " exceeds the limit " + std::to_string(opt.max_dim) + " (about " +
                    std::to_string(dim * emb.n_act * emb.n_act * 8 / (1 << 20)) +
                    " MiB of sigma intermediates)");
  const int nroots = std::min<int>(opt.n_roots, int(dim));
  FciResult res;
  if (dim == 0) return res;
  const Vec diag = fci_diagonal(emb, space);

  if (dim <= opt.dense_limit && !opt.force_davidson) {
    Mat H(dim, dim);
    Vec e = Vec::Zero(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      e(i) = 1.0;
      H.col(i) = fci_sigma(emb, space, e);
      e(i) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.transpose()));
    for (int k = 0; k < nroots; ++k) {
      res.energies.push_back(es.eigenvalues()(k));
      Vec v = es.eigenvectors().col(k);
      Eigen::Index imax;
      v.cwiseAbs().maxCoeff(&imax);
      if (v(imax) < 0) v = -v;
      res.vectors.push_back(v);
    }
    return res;
  }

  // Davidson with a diagonal preconditioner.
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag(a) < diag(b); });
  const int nstart = std::min<int>(int(dim), std::max(nroots, 2));
  Mat V = Mat::Zero(dim, nstart);
  // Lowest-diagonal determinants plus a small fixed-seed admixture so that
  // excited roots of any symmetry are reachable.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < nstart; ++k) {
    if (nroots > 1)
      for (std::size_t i = 0; i < dim; ++i) V(i, k) = 1e-3 * u(rng);
    V(order[k], k) = 1.0;
  }
  V = Eigen::HouseholderQR<Mat>(V).householderQ() * Mat::Identity(dim, nstart);
  Mat HV(dim, 0);
  auto extend_hv = [&]() {
    const Eigen::Index old = HV.cols();
    HV.conservativeResize(Eigen::NoChange, V.cols());
    for (Eigen::Index k = old; k < V.cols(); ++k) HV.col(k) = fci_sigma(emb, space, V.col(k));
  };
  extend_hv();
  Vec theta;
  Mat ritz, hritz;
  for (res.iterations = 1; res.iterations <= opt.max_iter; ++res.iterations) {
    const Mat S = V.transpose() * HV;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
    theta = es.eigenvalues().head(nroots);
    const Mat Y = es.eigenvectors().leftCols(nroots);
    ritz = V * Y;
    hritz = HV * Y;
    std::vector<Vec> corrections;
    double worst = 0.0;
    for (int k = 0; k < nroots; ++k) {
      Vec r = hritz.col(k) - theta(k) * ritz.col(k);
      const double rn = r.norm();
      worst = std::max(worst, rn);
      if (rn < opt.residual_tol) continue;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        double den = theta(k) - diag(i);
        if (std::abs(den) < 1e-8) den = std::copysign(1e-8, den);
        r(i) /= den;
      }
      corrections.push_back(r);
    }
    if (worst < opt.residual_tol) break;
    if (V.cols() + Eigen::Index(corrections.size()) > opt.max_subspace) {
      V = ritz;
      HV = hritz;
      // re-orthonormalize the collapsed basis
      Eigen::HouseholderQR<Mat> qr(V);
      const Mat Q = qr.householderQ() * Mat::Identity(V.rows(), V.cols());
      const Mat R = Q.transpose() * V;
      HV = HV * R.inverse();
      V = Q;
    }
    for (Vec t : corrections) {
      for (int pass = 0; pass < 2; ++pass) t -= V * (V.transpose() * t);
      const double tn = t.norm();
      if (tn < 1e-10) continue;
      V.conservativeResize(Eigen::NoChange, V.cols() + 1);
      V.col(V.cols() - 1) = t / tn;
    }
    if (V.cols() == HV.cols()) throw NumericalError("Davidson subspace stagnated");
    extend_hv();
  }
  if (res.iterations > opt.max_iter) throw NumericalError("Davidson did not converge");
  for (int k = 0; k < nroots; ++k) {
    res.energies.push_back(theta(k));
    Vec v = ritz.col(k).normalized();
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    res.vectors.push_back(v);
  }
  return res;
}

double casci_energy(const IntegralSet& ints, const ActiveSpace& cas) {
  const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
  if (emb.n_act == 0) return emb.e_core;
  return fci_solve(emb, emb.n_alpha, emb.n_beta).energies.at(0);
}

double fci_energy(const IntegralSet& ints) {
  return casci_energy(ints, ActiveSpace::full(ints));
}

Vec civector_to_sector(const Vec& c, const DeterminantSpace& space, const FockBasis& basis) {
  if (basis.n_qubits() != 2 * space.n_orb()) throw DomainError("basis size mismatch");
  Vec v = Vec::Zero(basis.size());
  for (std::size_t I = 0; I < space.dim(); ++I) {
    double sg;
    const std::uint64_t occ = space.occupation(I, sg);
    const std::int64_t k = basis.find(occ);
    if (k < 0) throw DomainError("determinant outside the basis");
    v(k) = sg * c(Eigen::Index(I));
  }
  return v;
}

Statevector civector_to_statevector(const Vec& c, const DeterminantSpace& space,
                                    Encoding enc) {
  const FockBasis basis =
      FockBasis::sector(space.n_orb(), space.n_alpha(), space.n_beta(), enc);
  return basis.expand(civector_to_sector(c, space, basis));
}

ReducedDensityMatrices rdms_from_civector(const Vec& c, const DeterminantSpace& space) {
  const FockBasis basis = FockBasis::sector(space.n_orb(), space.n_alpha(), space.n_beta(),
                                            Encoding::jordan_wigner);
  return rdms_from_vector(civector_to_sector(c, space, basis), basis);
}

}  // namespace vqeac
