// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "parabolic/funcspace.hpp"
#include "parabolic/milp_solve.hpp"

using namespace parabolic;

namespace {

MilpModel single_var_model() {
  MilpModel m;
  const int x = m.add_var("x", VarKind::continuous, 0, 10);
  m.add_con("c0", {{x, 1.0}}, Sense::ge, 3.0);
  m.set_objective_term(x, 1.0);
  return m;
}

// Enumeration oracle: fix every binary combination and solve the continuous
// rest as an LP. Independent of the branch-and-bound path.
MilpSolution enumerate_oracle(const MilpModel& model) {
  std::vector<int> binaries;
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
    if (model.vars[j].kind == VarKind::binary) binaries.push_back(j);
  MilpSolution best;
  best.status = SolveStatus::infeasible;
  const long combos = 1L << binaries.size();
  for (long mask = 0; mask < combos; ++mask) {
    MilpModel fixed = model;
    for (std::size_t k = 0; k < binaries.size(); ++k) {
      const double v = (mask >> k) & 1 ? 1.0 : 0.0;
      fixed.vars[binaries[k]].lb = v;
      fixed.vars[binaries[k]].ub = v;
    }
    MilpLimits lim;
    lim.time_sec = 30;
    const MilpSolution lp = solve_milp(fixed, lim);
    if (lp.status != SolveStatus::optimal) continue;
    if (best.status != SolveStatus::optimal ||
        lp.objective < best.objective - 1e-9) {
      best = lp;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single variable LP") {
  const MilpSolution sol = solve_milp(single_var_model());
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(3.0));
  CHECK(sol.assignment[0] == Catch::Approx(3.0));
}

TEST_CASE("binary knapsack tie broken by declaration order") {
  MilpModel m;
  const int x = m.add_var("x", VarKind::binary, 0, 1);
  const int y = m.add_var("y", VarKind::binary, 0, 1);
  m.add_con("c0", {{x, 1.0}, {y, 1.0}}, Sense::le, 1.5);
  m.set_objective_term(x, -1.0);
  m.set_objective_term(y, -1.0);
  const MilpSolution sol = solve_milp(m);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(-1.0));
  CHECK(sol.assignment[x] == Catch::Approx(1.0));
  CHECK(sol.assignment[y] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("size cap guard fires before solving") {
  MilpModel m;
  for (int i = 0; i < 1001; ++i)
    m.add_var("b" + std::to_string(i), VarKind::binary, 0, 1);
  m.set_objective_term(0, 1.0);
  const MilpSolution sol = solve_milp(m);
  CHECK(sol.status == SolveStatus::size_limit);
  CHECK_FALSE(sol.has_solution());
}

TEST_CASE("infeasible model detected") {
  MilpModel m;
  const int x = m.add_var("x", VarKind::continuous, 0, 1);
  m.add_con("c0", {{x, 1.0}}, Sense::ge, 2.0);
  const MilpSolution sol = solve_milp(m);
  CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("equality rows and negative bounds") {
  MilpModel m;
  const int x = m.add_var("x", VarKind::continuous, -4, 4);
  const int y = m.add_var("y", VarKind::continuous, -4, 4);
  m.add_con("sum", {{x, 1.0}, {y, 1.0}}, Sense::eq, 1.0);
  m.add_con("gap", {{x, 1.0}, {y, -1.0}}, Sense::le, 0.5);
  m.set_objective_term(x, -1.0);
  const MilpSolution sol = solve_milp(m);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.assignment[x] == Catch::Approx(0.75));
  CHECK(sol.assignment[y] == Catch::Approx(0.25));
}

TEST_CASE("check_point_feasible slacks") {
  const MilpModel m = single_var_model();
  auto rep = check_point_feasible(m, {3.0});
  CHECK(rep.feasible);
  rep = check_point_feasible(m, {2.5});
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].slack == Catch::Approx(-0.5));
  CHECK_THROWS_AS(check_point_feasible(m, {}), input_error);
}

TEST_CASE("warm start seeds the incumbent") {
  MilpModel m;
  const int x = m.add_var("x", VarKind::binary, 0, 1);
  m.add_con("c0", {{x, 1.0}}, Sense::le, 1.0);
  m.set_objective_term(x, -1.0);
  MilpLimits lim;
  lim.warm_start = std::vector<double>{1.0};
  lim.node_cap = 1;  // incumbent must come from the seed
  const MilpSolution sol = solve_milp(m, lim);
  REQUIRE(sol.has_solution());
  CHECK(sol.objective == Catch::Approx(-1.0));
}

TEST_CASE("randomized agreement with enumeration oracle") {
  detail::SplitMix64 rng(1234);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
  };
  int solved = 0, infeasible = 0;
  for (int inst = 0; inst < 200; ++inst) {
    MilpModel m;
    const int nb = 1 + static_cast<int>(rng.next() % 7);
    const int nc = 1 + static_cast<int>(rng.next() % 3);
    for (int j = 0; j < nb; ++j)
      m.add_var("b" + std::to_string(j), VarKind::binary, 0, 1);
    for (int j = 0; j < nc; ++j)
      m.add_var("x" + std::to_string(j), VarKind::continuous, -5, 5);
    const int nvars = nb + nc;
    const int nrows = 2 + static_cast<int>(rng.next() % 5);
    for (int r = 0; r < nrows; ++r) {
      std::vector<LinTerm> terms;
      for (int j = 0; j < nvars; ++j)
        if (rng.uniform01() < 0.6) terms.push_back({j, uniform(-4, 4)});
      if (terms.empty()) terms.push_back({0, 1.0});
      const int s = static_cast<int>(rng.next() % 3);
      const Sense sense = s == 0 ? Sense::le : (s == 1 ? Sense::ge : Sense::eq);
      m.add_con("r" + std::to_string(r), std::move(terms), sense,
                uniform(-6, 6));
    }
    for (int j = 0; j < nvars; ++j)
      if (rng.uniform01() < 0.8) m.set_objective_term(j, uniform(-3, 3));

    MilpLimits lim;
    lim.time_sec = 60;
    lim.paranoid = true;
    const MilpSolution got = solve_milp(m, lim);
    const MilpSolution want = enumerate_oracle(m);
    INFO("instance " << inst);
    REQUIRE(got.status == want.status);
    CHECK(got.stats.bound_violations == 0);
    if (got.status == SolveStatus::optimal) {
      ++solved;
      CHECK(got.objective == Catch::Approx(want.objective).margin(2e-6));
      CHECK(check_point_feasible(m, got.assignment, 2e-6).feasible);
      // LP relaxation bounds the MILP optimum from below.
      if (std::isfinite(got.stats.root_lp_objective))
        CHECK(got.stats.root_lp_objective <= got.objective + 1e-6);
    } else {
      ++infeasible;
    }
  }
  // The generator should exercise both outcomes.
  CHECK(solved > 20);
  CHECK(infeasible > 20);
}
