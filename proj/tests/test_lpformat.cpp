// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "parabolic/funcspace.hpp"
#include "parabolic/lp_format.hpp"
#include "parabolic/milp_solve.hpp"

using namespace parabolic;

namespace {

std::map<std::string, double> coeff_map(const MilpModel& m,
                                        const std::vector<LinTerm>& terms) {
  std::map<std::string, double> out;
  for (const auto& t : terms) out[m.vars[t.var].name] += t.coeff;
  return out;
}

bool models_equivalent(const MilpModel& a, const MilpModel& b) {
  if (a.vars.size() != b.vars.size() || a.cons.size() != b.cons.size())
    return false;
  for (std::size_t j = 0; j < a.vars.size(); ++j) {
    const auto& va = a.vars[j];
    const int k = b.var_index(va.name);
    if (k < 0) return false;
    const auto& vb = b.vars[k];
    if (va.kind != vb.kind) return false;
    if (!nearly_equal(va.lb, vb.lb) || !nearly_equal(va.ub, vb.ub))
      return false;
  }
  if (coeff_map(a, a.objective) != coeff_map(b, b.objective)) return false;
  for (std::size_t i = 0; i < a.cons.size(); ++i) {
    if (a.cons[i].sense != b.cons[i].sense) return false;
    if (!nearly_equal(a.cons[i].rhs, b.cons[i].rhs)) return false;
    if (coeff_map(a, a.cons[i].terms) != coeff_map(b, b.cons[i].terms))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("empty model exports header sections and End") {
  MilpModel m;
  const std::string text = export_lp(m);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.substr(text.size() - 4) == "End\n");
  const MilpModel back = parse_lp(text);
  CHECK(back.cons.empty());
}

TEST_CASE("one-constraint model round trips exactly") {
  MilpModel m;
  const int x = m.add_var("x", VarKind::continuous, -1.25, 3.5);
  const int y = m.add_var("y", VarKind::binary, 0, 1);
  m.add_con("cap", {{x, 2.0 / 3.0}, {y, -1.125}}, Sense::le, 0.7531);
  m.set_objective_term(x, 1.0);
  m.set_objective_term(y, -2.5);
  const MilpModel back = parse_lp(export_lp(m));
  CHECK(models_equivalent(m, back));
}

TEST_CASE("export is a fixpoint under re-parse") {
  MilpModel m;
  const int a = m.add_var("alpha0", VarKind::continuous, -10, 10);
  const int b = m.add_var("beta0", VarKind::continuous, -20, 20);
  const int s = m.add_var("s0", VarKind::binary, 0, 1);
  m.add_con("c0", {{a, 1.0}, {b, -3.25}, {s, 100.0}}, Sense::ge, -5.5);
  m.add_con("c1", {{a, 0.3333333333333333}, {b, 1.0}}, Sense::eq, 0.25);
  m.set_objective_term(a, 1e-3);
  const std::string once = export_lp(m);
  const std::string twice = export_lp(parse_lp(once));
  CHECK(once == twice);
}

TEST_CASE("parse handles sign and label variations") {
  const std::string text =
      "\\ comment line\n"
      "Minimize\n obj: - 2 x + y\n"
      "Subject To\n"
      " c0: x + y <= 4\n"
      " - x + 2 y >= -1\n"
      "Bounds\n"
      " -2 <= x <= 3\n"
      " y free\n"
      "End\n";
  const MilpModel m = parse_lp(text);
  REQUIRE(m.vars.size() == 2);
  CHECK(m.vars[0].lb == -2.0);
  CHECK(m.vars[1].lb == -kInf);
  REQUIRE(m.cons.size() == 2);
  CHECK(m.cons[1].sense == Sense::ge);
  CHECK(m.cons[1].rhs == -1.0);
}

TEST_CASE("maximize is rejected") {
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: x\nSubject To\nEnd\n"),
                  schema_error);
}

TEST_CASE("randomized export/parse round trip") {
  detail::SplitMix64 rng(31);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
  };
  for (int inst = 0; inst < 50; ++inst) {
    MilpModel m;
    const int nv = 1 + static_cast<int>(rng.next() % 6);
    for (int j = 0; j < nv; ++j) {
      if (rng.uniform01() < 0.4)
        m.add_var("b" + std::to_string(j), VarKind::binary, 0, 1);
      else
        m.add_var("x" + std::to_string(j), VarKind::continuous,
                  uniform(-50, 0), uniform(0, 50));
    }
    const int nr = static_cast<int>(rng.next() % 5);
    for (int r = 0; r < nr; ++r) {
      std::vector<LinTerm> terms;
      for (int j = 0; j < nv; ++j)
        if (rng.uniform01() < 0.7) terms.push_back({j, uniform(-9, 9)});
      if (terms.empty()) terms.push_back({0, 1.0});
      const int s = static_cast<int>(rng.next() % 3);
      m.add_con("r" + std::to_string(r), std::move(terms),
                s == 0 ? Sense::le : (s == 1 ? Sense::ge : Sense::eq),
                uniform(-20, 20));
    }
    for (int j = 0; j < nv; ++j)
      if (rng.uniform01() < 0.5) m.set_objective_term(j, uniform(-4, 4));
    INFO("instance " << inst);
    REQUIRE(models_equivalent(m, parse_lp(export_lp(m))));
  }
}

TEST_CASE("solution file round trip") {
  MilpModel m;
  m.add_var("x", VarKind::continuous, 0, 10);
  m.add_con("c0", {{0, 1.0}}, Sense::ge, 3.0);
  m.set_objective_term(0, 1.0);
  const MilpSolution sol = solve_milp(m);
  const std::string text = write_solution_file(m, sol);
  const SolutionFile parsed = parse_solution_file(text);
  CHECK(parsed.status == "optimal");
  CHECK(parsed.objective == Catch::Approx(3.0));
  const auto x = apply_solution(m, parsed);
  CHECK(x[0] == Catch::Approx(3.0));
  CHECK_THROWS_AS(parse_solution_file("objective not_a_number\n"),
                  schema_error);
  CHECK_THROWS_AS(apply_solution(m, SolutionFile{}), input_error);
}
