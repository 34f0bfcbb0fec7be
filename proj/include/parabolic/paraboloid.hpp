// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "parabolic/box.hpp"
#include "parabolic/common.hpp"

namespace parabolic {

// p(x) = sum_i alpha_i x_i^2 + sum_i beta_i x_i + gamma; quadratic terms are
// univariate only (no bilinear part).
struct Paraboloid {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0;

  int dim() const { return static_cast<int>(alpha.size()); }

  void validate() const {
    if (alpha.empty() || alpha.size() != beta.size())
      throw input_error("paraboloid: alpha/beta must be nonempty and match");
    for (double v : alpha)
      if (!std::isfinite(v)) throw input_error("paraboloid: non-finite alpha");
    for (double v : beta)
      if (!std::isfinite(v)) throw input_error("paraboloid: non-finite beta");
    if (!std::isfinite(gamma)) throw input_error("paraboloid: non-finite gamma");
  }

  double eval(std::span<const double> x) const {
    double v = gamma;
    for (int i = 0; i < dim(); ++i) v += alpha[i] * x[i] * x[i] + beta[i] * x[i];
    return v;
  }

  double eval1(double x) const {
    const double pt[1] = {x};
    return eval(std::span<const double>(pt, 1));
  }

  double partial(int i, double xi) const { return 2 * alpha[i] * xi + beta[i]; }

  // Exact integral over an axis-aligned box.
  double integral(const BoxDomain& cell) const {
    const int n = dim();
    const double vol = cell.volume();
    double acc = gamma * vol;
    for (int i = 0; i < n; ++i) {
      const double w = cell.width(i);
      double rest = vol / w;
      const double lo = cell.lo[i], hi = cell.hi[i];
      acc += alpha[i] * (hi * hi * hi - lo * lo * lo) / 3.0 * rest;
      acc += beta[i] * (hi * hi - lo * lo) / 2.0 * rest;
    }
    return acc;
  }

  // 1-D shift by s: q(x) = p(x - s).
  Paraboloid shifted_arg(double s) const {
    if (dim() != 1) throw input_error("shifted_arg is one-dimensional");
    Paraboloid q = *this;
    q.beta[0] = beta[0] - 2 * alpha[0] * s;
    q.gamma = gamma + alpha[0] * s * s - beta[0] * s;
    return q;
  }
};

using ParaboloidSet = std::vector<Paraboloid>;

inline double max_eval(const ParaboloidSet& set, std::span<const double> x) {
  double best = -kInf;
  for (const auto& p : set) best = std::max(best, p.eval(x));
  return best;
}

// Negates all coefficients: a below-approximation of -f becomes an
// above-approximation of f and vice versa.
inline Paraboloid flip_side(const Paraboloid& p) {
  Paraboloid q = p;
  for (auto& v : q.alpha) v = -v;
  for (auto& v : q.beta) v = -v;
  q.gamma = -q.gamma;
  return q;
}

inline ParaboloidSet flip_side(const ParaboloidSet& set) {
  ParaboloidSet out;
  out.reserve(set.size());
  for (const auto& p : set) out.push_back(flip_side(p));
  return out;
}

}  // namespace parabolic
