// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace vqeac {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// exp(kappa) for a real antisymmetric kappa (Pade scaling-and-squaring).
Mat antisymmetric_exp(const Mat& kappa);

/// Symmetric square root / inverse square root of a positive definite matrix.
/// Throws NumericalError when the smallest eigenvalue is below `floor`.
Mat spd_sqrt(const Mat& a, double floor = 0.0);
Mat spd_inv_sqrt(const Mat& a, double floor = 0.0);

}  // namespace vqeac
