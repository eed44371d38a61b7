// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file optimize.hpp
 * @brief BFGS with a strong-Wolfe line search.
 */

#pragma once

#include <functional>
#include <string>

#include "vqeac/linalg.hpp"

namespace vqeac {

/// Returns f(x) and writes the gradient.
using Objective = std::function<double(const Vec& x, Vec& grad)>;

struct BfgsOptions {
  double gtol = 1e-6;  ///< stop when max |g_i| < gtol
  int max_iter = 500;
  int max_line_search = 40;
  double c1 = 1e-4;
  double c2 = 0.9;
  double max_step = 1.0;  ///< cap on the infinity norm of the first trial step
};

struct BfgsResult {
  Vec x;
  double f = 0.0;
  Vec grad;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

/// Minimizes f from x0. `inv_diag`, when non-empty, is the diagonal of the
/// initial inverse Hessian. Throws NumericalError on a non-finite value.
BfgsResult bfgs_minimize(const Objective& f, const Vec& x0, const BfgsOptions& opt,
                         const Vec& inv_diag = Vec());

}  // namespace vqeac
