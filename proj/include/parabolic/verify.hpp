// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <queue>
#include <string>
#include <vector>

#include "parabolic/box.hpp"
#include "parabolic/funcspace.hpp"
#include "parabolic/paraboloid.hpp"

namespace parabolic {

// Certified bound on a global max: incumbent <= true max <= certified.
struct CheckResult {
  double certified = kInf;
  double incumbent = -kInf;
  std::vector<double> incumbent_point;
  double gap = kInf;
  long evaluations = 0;
  bool converged = false;
  std::string reason;
};

// Valid 1-norm Lipschitz constant of a paraboloid on a box: the partial
// derivatives are linear, so their maxima sit at the bounds.
inline double paraboloid_slope_bound(const Paraboloid& p, const BoxDomain& dom) {
  double c = 0;
  for (int i = 0; i < p.dim(); ++i) {
    c = std::max(c, std::abs(p.partial(i, dom.lo[i])));
    c = std::max(c, std::abs(p.partial(i, dom.hi[i])));
  }
  return c;
}

namespace detail {

// Sawtooth branch-and-bound for the 1-D certified max (Piyavskii-Shubert).
inline CheckResult certify_max_1d(
    const std::function<double(double)>& g, double a, double b, double lip,
    double tol, long eval_cap) {
  CheckResult out;
  out.incumbent_point = {a};

  auto consider = [&](double x, double v) {
    if (v > out.incumbent) {
      out.incumbent = v;
      out.incumbent_point[0] = x;
    }
  };

  const double ga = g(a), gb = g(b);
  out.evaluations = 2;
  consider(a, ga);
  consider(b, gb);

  if (lip <= 0) {
    // Constant (or certified constant-slope-free) handle: one round suffices.
    const double gm = g(0.5 * (a + b));
    ++out.evaluations;
    consider(0.5 * (a + b), gm);
    out.certified = out.incumbent;
    out.gap = 0;
    out.converged = true;
    return out;
  }

  struct Seg {
    double lo, hi, glo, ghi;
  };
  auto seg_ub = [&](const Seg& s) {
    return 0.5 * (s.glo + s.ghi) + 0.5 * lip * (s.hi - s.lo);
  };
  auto cmp = [&](const Seg& x, const Seg& y) { return seg_ub(x) < seg_ub(y); };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);
  heap.push({a, b, ga, gb});

  while (!heap.empty()) {
    const Seg top = heap.top();
    const double ub = seg_ub(top);
    if (ub <= out.incumbent + tol) {
      out.certified = ub;
      out.gap = ub - out.incumbent;
      out.converged = true;
      return out;
    }
    if (out.evaluations >= eval_cap) {
      out.certified = ub;  // still a valid global bound
      out.gap = ub - out.incumbent;
      out.reason = "evaluation cap reached before the tolerance";
      return out;
    }
    heap.pop();
    // Peak of the sawtooth over this segment.
    double x = 0.5 * (top.lo + top.hi) + (top.ghi - top.glo) / (2 * lip);
    const double width = top.hi - top.lo;
    x = std::clamp(x, top.lo + 1e-4 * width, top.hi - 1e-4 * width);
    const double gx = g(x);
    ++out.evaluations;
    consider(x, gx);
    heap.push({top.lo, x, top.glo, gx});
    heap.push({x, top.hi, gx, top.ghi});
  }
  out.certified = out.incumbent;
  out.gap = 0;
  out.converged = true;
  return out;
}

}  // namespace detail

// Certified global max of a Lipschitz function handle. 1-D uses the sawtooth
// envelope; n >= 2 falls back to a uniform grid whose spacing certifies
// max <= incumbent + lip*n*h/2, refusing when the needed grid is out of reach.
inline CheckResult certify_max(
    const std::function<double(std::span<const double>)>& g,
    double lip, const BoxDomain& dom, double tol, long eval_cap = 4000000) {
  if (!(tol > 0)) throw input_error("certify_max: tolerance must be positive");
  if (dom.dim() == 1) {
    auto g1 = [&](double x) {
      const double pt[1] = {x};
      return g(std::span<const double>(pt, 1));
    };
    return detail::certify_max_1d(g1, dom.lo[0], dom.hi[0], lip, tol, eval_cap);
  }

  const int n = dom.dim();
  CheckResult out;
  const double needed_h = 2 * tol / std::max(lip * n, 1e-300);
  double total = 1;
  std::vector<long> counts(n);
  for (int i = 0; i < n; ++i) {
    counts[i] = static_cast<long>(std::ceil(dom.width(i) / needed_h)) + 1;
    total *= static_cast<double>(counts[i]);
  }
  if (needed_h < 1e-12 * dom.max_width() ||
      total > static_cast<double>(eval_cap)) {
    out.reason = "grid certification refused: required spacing underflows";
    return out;
  }
  std::vector<long> idx(n, 0);
  std::vector<double> pt(n);
  out.incumbent_point.assign(n, 0.0);
  double hmax = 0;
  for (int i = 0; i < n; ++i)
    hmax = std::max(hmax, dom.width(i) / static_cast<double>(counts[i] - 1));
  for (;;) {
    for (int i = 0; i < n; ++i)
      pt[i] = dom.lo[i] + dom.width(i) * static_cast<double>(idx[i]) /
                              static_cast<double>(counts[i] - 1);
    const double v = g(pt);
    ++out.evaluations;
    if (v > out.incumbent) {
      out.incumbent = v;
      out.incumbent_point = pt;
    }
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  out.certified = out.incumbent + lip * n * hmax / 2;
  out.gap = out.certified - out.incumbent;
  out.converged = true;
  return out;
}

// Lower bound of Lemma-style vertex arguments (mode "lower"): a Lipschitz g
// that is nonnegative at all vertices of the box obeys
//   min g >= -(L n/(n+1)) * ||b-a||_1.
// Upper mode: nonpositive vertices plus a nonpositive integral give
//   max g <= ((sqrt 3 - 1)/2) * Dmax * n * L.
inline double lemma_bounds(const std::string& mode, double lip,
                           const BoxDomain& dom) {
  if (!(lip > 0)) throw input_error("lemma_bounds: L must be positive");
  const int n = dom.dim();
  if (mode == "lower")
    return -(lip * n / (n + 1.0)) * dom.sum_width();
  if (mode == "upper")
    return 0.5 * (std::sqrt(3.0) - 1.0) * dom.max_width() * n * lip;
  throw input_error("lemma_bounds: mode must be lower or upper");
}

struct ConditionReport {
  CheckResult c1;
  std::vector<CheckResult> c2;
  bool pass = false;
  std::string reason;
};

namespace detail {

inline ConditionReport check_conditions_below(const ParaboloidSet& set,
                                              const FuncDef& func,
                                              const BoxDomain& dom,
                                              double epsilon, double tol) {
  ConditionReport rep;
  if (set.empty()) {
    rep.reason = "empty paraboloid set";
    return rep;
  }
  const double lf = lipschitz_bound(func, dom);

  // One-sidedness per paraboloid: max (p - f) <= 0.
  rep.c2.resize(set.size());
  auto run_c2 = [&](std::size_t l) {
    const double lip = paraboloid_slope_bound(set[l], dom) + lf;
    return certify_max(
        [&, l](std::span<const double> x) {
          return set[l].eval(x) - func.eval(x);
        },
        lip, dom, tol);
  };
  if (set.size() > 1) {
    std::vector<std::future<CheckResult>> futs;
    futs.reserve(set.size());
    for (std::size_t l = 0; l < set.size(); ++l)
      futs.push_back(std::async(std::launch::async, run_c2, l));
    for (std::size_t l = 0; l < set.size(); ++l) rep.c2[l] = futs[l].get();
  } else {
    rep.c2[0] = run_c2(0);
  }

  // Coverage: max (f - eps - max_l p^l) <= 0. The max of Lipschitz functions
  // keeps the largest member constant, so lf + max_l C_p is valid.
  double cmax = 0;
  for (const auto& p : set) cmax = std::max(cmax, paraboloid_slope_bound(p, dom));
  rep.c1 = certify_max(
      [&](std::span<const double> x) {
        return func.eval(x) - epsilon - max_eval(set, x);
      },
      lf + cmax, dom, tol);

  rep.pass = rep.c1.converged && rep.c1.certified <= tol;
  for (const auto& r : rep.c2)
    rep.pass = rep.pass && r.converged && r.certified <= tol;
  if (!rep.pass) {
    for (std::size_t l = 0; l < rep.c2.size(); ++l)
      if (!rep.c2[l].converged)
        rep.reason = "C2 certification refused for paraboloid " +
                     std::to_string(l) + ": " + rep.c2[l].reason;
    if (!rep.c1.converged)
      rep.reason = "C1 certification refused: " + rep.c1.reason;
    if (rep.reason.empty()) rep.reason = "certified bound above tolerance";
  }
  return rep;
}

}  // namespace detail

// Global certification of the approximation conditions. side == "above" is
// checked by flipping the set against the negated function.
inline ConditionReport check_conditions(const ParaboloidSet& set,
                                        const FuncDef& func,
                                        const BoxDomain& dom, double epsilon,
                                        const std::string& side,
                                        double tol = kCertTol) {
  if (side == "below")
    return detail::check_conditions_below(set, func, dom, epsilon, tol);
  if (side == "above")
    return detail::check_conditions_below(flip_side(set), negated(func), dom,
                                          epsilon, tol);
  throw input_error("check_conditions: side must be below or above");
}

}  // namespace parabolic
