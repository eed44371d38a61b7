// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "vqeac/errors.hpp"

namespace vqeac {

Mat antisymmetric_exp(const Mat& kappa) {
  if (kappa.size() == 0) return kappa;
  return kappa.exp();
}

namespace {

Mat spd_power(const Mat& a, double floor, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  Vec ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() <= floor)
    throw NumericalError("matrix not positive definite (min eigenvalue " +
                         std::to_string(ev.minCoeff()) + ")");
  Vec f = ev.cwiseSqrt();
  if (inverse) f = f.cwiseInverse().eval();
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Mat spd_sqrt(const Mat& a, double floor) { return spd_power(a, floor, false); }
Mat spd_inv_sqrt(const Mat& a, double floor) { return spd_power(a, floor, true); }

}  // namespace vqeac
