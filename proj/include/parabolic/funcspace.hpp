// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parabolic/box.hpp"
#include "parabolic/common.hpp"

namespace parabolic {

// Strictly increasing breakpoints with values; piecewise-linear in between,
// every segment slope has magnitude <= 1 by construction.
struct ZigzagData {
  std::vector<double> breakpoints;
  std::vector<double> values;

  void validate() const {
    if (breakpoints.size() < 2 || breakpoints.size() != values.size())
      throw input_error("zigzag: need >= 2 breakpoints with matching values");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
      if (!(breakpoints[k] < breakpoints[k + 1]))
        throw input_error("zigzag: breakpoints must be strictly increasing");
  }

  double eval(double x) const {
    if (x < breakpoints.front() - 1e-12 || x > breakpoints.back() + 1e-12)
      throw domain_error("zigzag: point outside breakpoint range");
    x = std::clamp(x, breakpoints.front(), breakpoints.back());
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    std::size_t k = it == breakpoints.begin()
                        ? 0
                        : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    if (k + 1 >= breakpoints.size()) k = breakpoints.size() - 2;
    const double x0 = breakpoints[k], x1 = breakpoints[k + 1];
    const double t = (x - x0) / (x1 - x0);
    return values[k] + t * (values[k + 1] - values[k]);
  }

  double max_abs_slope() const {
    double s = 0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
      s = std::max(s, std::abs(values[k + 1] - values[k]) /
                          (breakpoints[k + 1] - breakpoints[k]));
    return s;
  }

  // Exact integral over [c, d] (trapezoids of the piecewise-linear graph).
  double integral(double c, double d) const {
    if (c > d) return -integral(d, c);
    if (c < breakpoints.front() - 1e-9 || d > breakpoints.back() + 1e-9)
      throw domain_error("zigzag: integration range outside breakpoints");
    c = std::clamp(c, breakpoints.front(), breakpoints.back());
    d = std::clamp(d, breakpoints.front(), breakpoints.back());
    double acc = 0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
      const double s0 = std::max(c, breakpoints[k]);
      const double s1 = std::min(d, breakpoints[k + 1]);
      if (s0 >= s1) continue;
      acc += 0.5 * (eval(s0) + eval(s1)) * (s1 - s0);
    }
    return acc;
  }
};

// An approximable function: point evaluator, Lipschitz-constant rule for a
// sub-box, and the exact integral measure used by the fit model.
struct FuncDef {
  std::string id;
  BoxDomain admissible;
  std::function<double(std::span<const double>)> eval;
  std::function<double(const BoxDomain&)> lipschitz;
  std::function<double(const BoxDomain&)> measure;
  std::function<double(double)> derivative;  // optional, 1-D only

  double eval1(double x) const {
    const double pt[1] = {x};
    return eval(std::span<const double>(pt, 1));
  }
};

inline double eval_func(const FuncDef& f, std::span<const double> x) {
  if (!f.admissible.contains(x, 1e-9))
    throw domain_error(f.id + ": point outside declared domain");
  return f.eval(x);
}

inline double lipschitz_bound(const FuncDef& f, const BoxDomain& dom) {
  if (!f.admissible.contains_box(dom, 1e-9))
    throw domain_error(f.id + ": box outside declared domain");
  return f.lipschitz(dom);
}

inline double integral_measure(const FuncDef& f, const BoxDomain& cell) {
  if (!f.admissible.contains_box(cell, 1e-9))
    throw domain_error(f.id + ": cell outside declared domain");
  return f.measure(cell);
}

namespace detail {

inline double arg1(std::span<const double> x) {
  if (x.size() != 1) throw input_error("registry functions are univariate");
  return x[0];
}

inline void require_1d(const BoxDomain& d) {
  if (d.dim() != 1) throw input_error("registry functions are univariate");
}

// Sample points of the canonical zigzag fixture (full plot precision).
inline const ZigzagData& canonical_zigzag() {
  static const ZigzagData z = [] {
    ZigzagData data;
    data.breakpoints = {
        -5.0,
        -4.964333030490388,
        -4.523363861798294,
        -4.186332389004458,
        -3.563254132317301,
        -3.289095129965463,
        -2.7552444566311944,
        -2.2368021165781053,
        -1.4493203202395986,
        -0.9500258512314901,
        -0.8611768289925197,
        -0.7865431896495103,
        -0.6809775831455038,
        -0.080199727256694,
        0.035676500210189144,
        0.3920045223634554,
        0.601730316365771,
        1.0899694535620053,
        1.482993178169379,
        2.0671973152584076,
        2.770942138399492,
        3.2759504159580066,
        3.6241479321024053,
        4.0574184357655545,
        4.8362120289126835,
        5.0,
    };
    data.values = {
        -0.12801019571599248,
        -0.12446757554744907,
        -0.1946982637766576,
        -0.3937836755004518,
        -0.6434453088250474,
        -0.5770254473388788,
        -0.9671849317937837,
        -1.2943844007567447,
        -0.7368862021423581,
        -0.3908137365219214,
        -0.38988151656613956,
        -0.4006105011239624,
        -0.4793286685566136,
        -0.808540514189117,
        -0.8733602373302513,
        -0.8963166811449923,
        -0.8374228572870663,
        -0.832309313959877,
        -0.6014963419021636,
        -0.9960694536135861,
        -0.34221861821876076,
        0.05120309491708941,
        0.09796193184439114,
        0.043150841431488146,
        0.09860744585003525,
        0.11308897556235686,
    };
    data.validate();
    return data;
  }();
  return z;
}

inline FuncDef make_piecewise_linear(std::string id, ZigzagData data) {
  data.validate();
  auto shared = std::make_shared<ZigzagData>(std::move(data));
  FuncDef f;
  f.id = std::move(id);
  f.admissible =
      BoxDomain::interval(shared->breakpoints.front(), shared->breakpoints.back());
  f.eval = [shared](std::span<const double> x) {
    return shared->eval(arg1(x));
  };
  f.lipschitz = [shared](const BoxDomain& dom) {
    require_1d(dom);
    double s = 0;
    const auto& bp = shared->breakpoints;
    const auto& v = shared->values;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      if (bp[k + 1] <= dom.lo[0] || bp[k] >= dom.hi[0]) continue;
      s = std::max(s, std::abs(v[k + 1] - v[k]) / (bp[k + 1] - bp[k]));
    }
    return s;
  };
  f.measure = [shared](const BoxDomain& cell) {
    require_1d(cell);
    return shared->integral(cell.lo[0], cell.hi[0]);
  };
  return f;
}

}  // namespace detail

// Registry of the built-in approximable functions. Lipschitz constants use
// the maximal absolute derivative at the bounds (sin/cos use the global 1).
inline FuncDef registry(const std::string& id) {
  using detail::arg1;
  using detail::require_1d;
  FuncDef f;
  f.id = id;
  if (id == "exp") {
    f.admissible = BoxDomain::interval(-1e6, 700.0);
    f.eval = [](std::span<const double> x) { return std::exp(arg1(x)); };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      return std::exp(d.hi[0]);
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      return std::exp(c.hi[0]) - std::exp(c.lo[0]);
    };
    f.derivative = [](double x) { return std::exp(x); };
  } else if (id == "sin") {
    f.admissible = BoxDomain::interval(-1e9, 1e9);
    f.eval = [](std::span<const double> x) { return std::sin(arg1(x)); };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      return 1.0;
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      return std::cos(c.lo[0]) - std::cos(c.hi[0]);
    };
    f.derivative = [](double x) { return std::cos(x); };
  } else if (id == "cos") {
    f.admissible = BoxDomain::interval(-1e9, 1e9);
    f.eval = [](std::span<const double> x) { return std::cos(arg1(x)); };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      return 1.0;
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      return std::sin(c.hi[0]) - std::sin(c.lo[0]);
    };
    f.derivative = [](double x) { return -std::sin(x); };
  } else if (id == "ln") {
    f.admissible = BoxDomain::interval(1e-12, 1e12);
    f.eval = [](std::span<const double> x) { return std::log(arg1(x)); };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      if (d.lo[0] <= 0) throw domain_error("ln: domain must satisfy a > 0");
      return 1.0 / d.lo[0];
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      auto anti = [](double x) { return x * std::log(x) - x; };
      return anti(c.hi[0]) - anti(c.lo[0]);
    };
    f.derivative = [](double x) { return 1.0 / x; };
  } else if (id == "sqrt") {
    f.admissible = BoxDomain::interval(1e-12, 1e12);
    f.eval = [](std::span<const double> x) { return std::sqrt(arg1(x)); };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      if (d.lo[0] <= 0) throw domain_error("sqrt: domain must satisfy a > 0");
      return 0.5 / std::sqrt(d.lo[0]);
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      auto anti = [](double x) { return (2.0 / 3.0) * std::pow(x, 1.5); };
      return anti(c.hi[0]) - anti(c.lo[0]);
    };
    f.derivative = [](double x) { return 0.5 / std::sqrt(x); };
  } else if (id == "cube") {
    f.admissible = BoxDomain::interval(-1e6, 1e6);
    f.eval = [](std::span<const double> x) {
      const double v = arg1(x);
      return v * v * v;
    };
    f.lipschitz = [](const BoxDomain& d) {
      require_1d(d);
      return 3.0 * std::max(d.lo[0] * d.lo[0], d.hi[0] * d.hi[0]);
    };
    f.measure = [](const BoxDomain& c) {
      require_1d(c);
      auto anti = [](double x) { return 0.25 * x * x * x * x; };
      return anti(c.hi[0]) - anti(c.lo[0]);
    };
    f.derivative = [](double x) { return 3.0 * x * x; };
  } else if (id == "zigzag") {
    f = detail::make_piecewise_linear("zigzag", detail::canonical_zigzag());
  } else {
    throw input_error("unknown function id: " + id);
  }
  return f;
}

// View of -f on the same domain; used to treat above-approximations as
// below-approximations of the negated function.
inline FuncDef negated(const FuncDef& f) {
  FuncDef g;
  g.id = "neg:" + f.id;
  g.admissible = f.admissible;
  auto ev = f.eval;
  g.eval = [ev](std::span<const double> x) { return -ev(x); };
  g.lipschitz = f.lipschitz;
  auto mu = f.measure;
  g.measure = [mu](const BoxDomain& c) { return -mu(c); };
  if (f.derivative) {
    auto der = f.derivative;
    g.derivative = [der](double x) { return -der(x); };
  }
  return g;
}

namespace detail {

// Fully specified uniform draw in [0, 1): top 53 bits of a splitmix64 stream.
// Keeps generated zigzags identical across platforms and standard libraries.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

}  // namespace detail

// Random piecewise-linear function on [lo, hi]: gaps uniform in (0, 1],
// segment slopes uniform in [-1, 1], first value uniform in [-1, 1].
inline ZigzagData zigzag_generate(std::uint64_t seed, double lo, double hi) {
  if (!(lo < hi)) throw input_error("zigzag_generate: range must be nondegenerate");
  detail::SplitMix64 rng(seed);
  ZigzagData z;
  z.breakpoints.push_back(lo);
  z.values.push_back(2.0 * rng.uniform01() - 1.0);
  double x = lo;
  while (x < hi) {
    const double gap = 1.0 - rng.uniform01();  // in (0, 1]
    const double slope = 2.0 * rng.uniform01() - 1.0;
    double next = x + gap;
    if (next > hi) next = hi;
    z.values.push_back(z.values.back() + slope * (next - x));
    z.breakpoints.push_back(next);
    x = next;
  }
  z.validate();
  return z;
}

inline FuncDef user_table_func(std::string id, ZigzagData table) {
  return detail::make_piecewise_linear(std::move(id), std::move(table));
}

}  // namespace parabolic
