// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "vqeac/optimize.hpp"

#include <cmath>

#include "vqeac/errors.hpp"

namespace vqeac {

namespace {

struct Probe {
  double a = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
  Vec g;
};

// Minimizer of the cubic through two probes, clamped into the bracket.
double cubic_step(const Probe& lo, const Probe& hi) {
  const double d1 = lo.d + hi.d - 3.0 * (lo.f - hi.f) / (lo.a - hi.a);
  const double disc = d1 * d1 - lo.d * hi.d;
  double a = 0.5 * (lo.a + hi.a);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), hi.a - lo.a);
    const double t = hi.a - (hi.a - lo.a) * (hi.d + d2 - d1) / (hi.d - lo.d + 2.0 * d2);
    if (std::isfinite(t)) a = t;
  }
  const double lo_b = std::min(lo.a, hi.a), hi_b = std::max(lo.a, hi.a);
  const double margin = 0.1 * (hi_b - lo_b);
  return std::clamp(a, lo_b + margin, hi_b - margin);
}

}  // namespace

BfgsResult bfgs_minimize(const Objective& f, const Vec& x0, const BfgsOptions& opt,
                         const Vec& inv_diag) {
  const Eigen::Index n = x0.size();
  BfgsResult res;
  res.x = x0;
  res.grad = Vec::Zero(n);
  auto eval = [&](const Vec& x, Vec& g) {
    ++res.evaluations;
    const double v = f(x, g);
    if (!std::isfinite(v) || !g.allFinite())
      throw NumericalError("objective returned a non-finite value after " +
                           std::to_string(res.evaluations) + " evaluations");
    return v;
  };
  res.f = eval(res.x, res.grad);
  if (n == 0) {
    res.converged = true;
    res.message = "no parameters";
    return res;
  }
  Mat hinv = Mat::Identity(n, n);
  if (inv_diag.size() == n) hinv = inv_diag.asDiagonal();

  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    if (res.grad.cwiseAbs().maxCoeff() < opt.gtol) {
      res.converged = true;
      res.message = "gradient tolerance reached";
      return res;
    }
    Vec p = -hinv * res.grad;
    double d0 = p.dot(res.grad);
    if (d0 >= 0.0) {  // lost positive definiteness
      hinv = inv_diag.size() == n ? Mat(inv_diag.asDiagonal()) : Mat::Identity(n, n);
      p = -hinv * res.grad;
      d0 = p.dot(res.grad);
    }
    double a1 = 1.0;
    if (res.iterations == 0 && inv_diag.size() != n) {
      const double pmax = p.cwiseAbs().maxCoeff();
      if (pmax > opt.max_step) a1 = opt.max_step / pmax;
    }

    Probe prev{0.0, res.f, d0, res.grad};
    Probe lo = prev, hi;
    Probe cur;
    cur.g = Vec(n);
    bool found = false, bracketed = false;
    double a = a1;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      cur.a = a;
      cur.f = eval(res.x + a * p, cur.g);
      cur.d = cur.g.dot(p);
      if (!bracketed) {
        if (cur.f > res.f + opt.c1 * a * d0 || (ls > 0 && cur.f >= prev.f)) {
          lo = prev;
          hi = cur;
          bracketed = true;
        } else if (std::abs(cur.d) <= -opt.c2 * d0) {
          found = true;
          break;
        } else if (cur.d >= 0.0) {
          lo = cur;
          hi = prev;
          bracketed = true;
        } else {
          prev = cur;
          a *= 2.0;
          continue;
        }
      } else {
        if (cur.f > res.f + opt.c1 * a * d0 || cur.f >= lo.f) {
          hi = cur;
        } else {
          if (std::abs(cur.d) <= -opt.c2 * d0) {
            found = true;
            break;
          }
          if (cur.d * (hi.a - lo.a) >= 0.0) hi = lo;
          lo = cur;
        }
      }
      if (std::abs(hi.a - lo.a) < 1e-16 * std::max(1.0, lo.a)) break;
      a = cubic_step(lo, hi);
    }
    if (!found) {
      // Accept the best sufficient-decrease point if there is one.
      if (bracketed && lo.a > 0.0 && lo.f < res.f) {
        cur = lo;
      } else {
        res.message = "line search failed";
        res.converged = res.grad.cwiseAbs().maxCoeff() < opt.gtol;
        return res;
      }
    }
    const Vec s = cur.a * p;
    const Vec y = cur.g - res.grad;
    res.x += s;
    res.f = cur.f;
    res.grad = cur.g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Vec hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
              rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  res.converged = res.grad.cwiseAbs().maxCoeff() < opt.gtol;
  res.message = res.converged ? "gradient tolerance reached" : "iteration limit reached";
  return res;
}

}  // namespace vqeac
