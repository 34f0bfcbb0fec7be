// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "parabolic/funcspace.hpp"

using namespace parabolic;

namespace {
constexpr double kPi = std::numbers::pi;

double eval1(const FuncDef& f, double x) {
  const double pt[1] = {x};
  return eval_func(f, std::span<const double>(pt, 1));
}
}  // namespace

TEST_CASE("eval_func on registry functions") {
  CHECK(eval1(registry("sin"), kPi / 2) == Catch::Approx(1.0));
  CHECK(eval1(registry("cube"), -2.0) == Catch::Approx(-8.0));
  // First sample point of the canonical zigzag fixture.
  CHECK(eval1(registry("zigzag"), -5.0) ==
        Catch::Approx(-0.12801019571599248).epsilon(1e-12));
  CHECK_THROWS_AS(eval1(registry("zigzag"), -6.0), domain_error);
  CHECK_THROWS_AS(eval1(registry("ln"), -1.0), domain_error);
}

TEST_CASE("lipschitz_bound per function") {
  CHECK(lipschitz_bound(registry("exp"), BoxDomain::interval(-5, 2)) ==
        Catch::Approx(std::exp(2.0)));
  CHECK(lipschitz_bound(registry("sin"), BoxDomain::interval(0, 2 * kPi)) ==
        Catch::Approx(1.0));
  // max of |3 x^2| over the endpoints of [-5, 2]
  CHECK(lipschitz_bound(registry("cube"), BoxDomain::interval(-5, 2)) ==
        Catch::Approx(75.0));
  CHECK(lipschitz_bound(registry("zigzag"), BoxDomain::interval(-5, 5)) <=
        1.0 + 1e-12);
  CHECK(lipschitz_bound(registry("ln"), BoxDomain::interval(0.5, 3)) ==
        Catch::Approx(2.0));
  CHECK(lipschitz_bound(registry("sqrt"), BoxDomain::interval(0.25, 4)) ==
        Catch::Approx(1.0));
  CHECK_THROWS_AS(lipschitz_bound(registry("ln"), BoxDomain::interval(-1, 1)),
                  domain_error);
}

TEST_CASE("integral_measure closed forms") {
  CHECK(integral_measure(registry("sin"), BoxDomain::interval(0, kPi)) ==
        Catch::Approx(2.0));
  CHECK(integral_measure(registry("cube"), BoxDomain::interval(0, 2)) ==
        Catch::Approx(4.0));
}

TEST_CASE("zigzag integral agrees with dense quadrature") {
  const auto& z = detail::canonical_zigzag();
  const double exact = z.integral(-5.0, 5.0);
  // Midpoint quadrature with 1e6 samples as the independent oracle.
  const long n = 1000000;
  double acc = 0;
  const double h = 10.0 / n;
  for (long i = 0; i < n; ++i) acc += z.eval(-5.0 + (i + 0.5) * h) * h;
  CHECK(exact == Catch::Approx(acc).margin(1e-6));
}

TEST_CASE("zigzag_generate determinism and slope bound") {
  const auto a = zigzag_generate(7, -5.0, 5.0);
  const auto b = zigzag_generate(7, -5.0, 5.0);
  REQUIRE(a.breakpoints == b.breakpoints);
  REQUIRE(a.values == b.values);
  CHECK(a.max_abs_slope() <= 1.0 + 1e-12);
  CHECK(a.breakpoints.front() == -5.0);
  CHECK(a.breakpoints.back() == 5.0);

  const auto c = zigzag_generate(8, -5.0, 5.0);
  CHECK(a.breakpoints != c.breakpoints);
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    CHECK(zigzag_generate(seed, 0.0, 3.0).max_abs_slope() <= 1.0 + 1e-12);
}

TEST_CASE("zigzag evaluation at breakpoints is exact") {
  const auto& z = detail::canonical_zigzag();
  for (std::size_t k = 0; k < z.breakpoints.size(); ++k)
    CHECK(z.eval(z.breakpoints[k]) == z.values[k]);
}

TEST_CASE("lipschitz property by random sampling") {
  struct Case {
    const char* id;
    double lo, hi;
  };
  const Case cases[] = {{"exp", -5, 2},  {"sin", -kPi / 2, 3 * kPi / 2},
                        {"cos", 0, 2 * kPi}, {"cube", -5, 2},
                        {"ln", 0.5, 5},   {"sqrt", 0.25, 4},
                        {"zigzag", -5, 5}};
  detail::SplitMix64 rng(42);
  for (const auto& c : cases) {
    const FuncDef f = registry(c.id);
    const BoxDomain dom = BoxDomain::interval(c.lo, c.hi);
    const double L = lipschitz_bound(f, dom);
    for (int it = 0; it < 10000; ++it) {
      const double x = c.lo + (c.hi - c.lo) * rng.uniform01();
      const double y = c.lo + (c.hi - c.lo) * rng.uniform01();
      const double lhs = std::abs(eval1(f, x) - eval1(f, y));
      REQUIRE(lhs <= L * std::abs(x - y) + 1e-12);
    }
  }
}

TEST_CASE("integral_measure additivity over random splits") {
  struct Case {
    const char* id;
    double lo, hi;
  };
  const Case cases[] = {{"exp", -2, 2}, {"sin", 0, 2 * kPi}, {"cube", -2, 2},
                        {"zigzag", -5, 5}, {"ln", 0.5, 5}};
  detail::SplitMix64 rng(43);
  for (const auto& c : cases) {
    const FuncDef f = registry(c.id);
    for (int it = 0; it < 200; ++it) {
      const double mid = c.lo + (c.hi - c.lo) * rng.uniform01();
      if (mid <= c.lo || mid >= c.hi) continue;
      const double whole = integral_measure(f, BoxDomain::interval(c.lo, c.hi));
      const double left = integral_measure(f, BoxDomain::interval(c.lo, mid));
      const double right = integral_measure(f, BoxDomain::interval(mid, c.hi));
      REQUIRE(whole == Catch::Approx(left + right).margin(1e-10));
    }
  }
}

TEST_CASE("measure of a near-degenerate cell vanishes") {
  const FuncDef f = registry("sin");
  const double v = integral_measure(f, BoxDomain::interval(1.0, 1.0 + 1e-13));
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("negated view flips evaluation and measure") {
  const FuncDef f = registry("exp");
  const FuncDef g = negated(f);
  CHECK(eval1(g, 1.0) == Catch::Approx(-std::exp(1.0)));
  CHECK(integral_measure(g, BoxDomain::interval(0, 1)) ==
        Catch::Approx(-(std::exp(1.0) - 1.0)));
  CHECK(lipschitz_bound(g, BoxDomain::interval(0, 1)) ==
        Catch::Approx(std::exp(1.0)));
}
