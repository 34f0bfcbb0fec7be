// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "parabolic/common.hpp"

namespace parabolic {

// Non-empty, full-dimensional axis-aligned box [lo, hi].
struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;

  BoxDomain() = default;
  BoxDomain(std::vector<double> lower, std::vector<double> upper)
      : lo(std::move(lower)), hi(std::move(upper)) {
    validate();
  }

  static BoxDomain interval(double a, double b) { return BoxDomain({a}, {b}); }

  void validate() const {
    if (lo.empty() || lo.size() != hi.size())
      throw input_error("box: dimension must be >= 1 and bounds consistent");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i]))
        throw input_error("box: lower bound must be strictly below upper");
  }

  int dim() const { return static_cast<int>(lo.size()); }
  double width(int i) const { return hi[i] - lo[i]; }

  double max_width() const {
    double w = 0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, width(i));
    return w;
  }

  double sum_width() const {
    double w = 0;
    for (int i = 0; i < dim(); ++i) w += width(i);
    return w;
  }

  double volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }

  bool contains(std::span<const double> x, double tol = 1e-12) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
  }

  bool contains_box(const BoxDomain& inner, double tol = 1e-12) const {
    if (inner.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (inner.lo[i] < lo[i] - tol || inner.hi[i] > hi[i] + tol) return false;
    return true;
  }
};

}  // namespace parabolic
