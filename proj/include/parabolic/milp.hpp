// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "parabolic/common.hpp"

namespace parabolic {

enum class VarKind { continuous, binary };
enum class Sense { le, ge, eq };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lb = 0;
  double ub = 0;
};

struct LinTerm {
  int var = -1;
  double coeff = 0;
};

struct Constraint {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::le;
  double rhs = 0;
};

// Solver-agnostic linear model with binaries; minimization only.
struct MilpModel {
  std::vector<Variable> vars;
  std::vector<Constraint> cons;
  std::vector<LinTerm> objective;
  double objective_offset = 0;

  int add_var(std::string name, VarKind kind, double lb, double ub) {
    if (kind == VarKind::binary && (lb < -kFeasTol || ub > 1 + kFeasTol))
      throw model_error("binary variable bounds must lie inside [0, 1]");
    vars.push_back({std::move(name), kind, lb, ub});
    return static_cast<int>(vars.size()) - 1;
  }

  void add_con(std::string name, std::vector<LinTerm> terms, Sense sense,
               double rhs) {
    for (const auto& t : terms)
      if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
        throw model_error("constraint references undeclared variable");
    cons.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  void set_objective_term(int var, double coeff) {
    objective.push_back({var, coeff});
  }

  long binary_count() const {
    long k = 0;
    for (const auto& v : vars)
      if (v.kind == VarKind::binary) ++k;
    return k;
  }
  long continuous_count() const {
    return static_cast<long>(vars.size()) - binary_count();
  }

  int var_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(vars.size()); ++i)
      if (vars[i].name == name) return i;
    return -1;
  }

  void validate() const {
    for (const auto& v : vars) {
      if (!(v.lb <= v.ub)) throw model_error("variable " + v.name + ": lb > ub");
      if (!std::isfinite(v.lb) || !std::isfinite(v.ub))
        throw model_error("variable " + v.name + ": bounds must be finite");
    }
  }

  double objective_value(const std::vector<double>& x) const {
    double z = objective_offset;
    for (const auto& t : objective) z += t.coeff * x[t.var];
    return z;
  }
};

enum class SolveStatus { optimal, infeasible, size_limit, time_limit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::size_limit: return "size_limit";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "?";
}

struct SolveStats {
  long nodes = 0;
  long simplex_iterations = 0;
  double wall_seconds = 0;
  double root_lp_objective = std::numeric_limits<double>::quiet_NaN();
  long bound_violations = 0;  // populated only in paranoid mode
  bool cutoff_active = false;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> assignment;  // empty unless an incumbent exists
  double objective = std::numeric_limits<double>::quiet_NaN();
  SolveStats stats;

  bool has_solution() const { return !assignment.empty(); }
};

struct MilpLimits {
  double time_sec = 600.0;
  long node_cap = 500000;
  long binary_cap = 1000;
  long continuous_cap = 200000;
  // Nodes whose LP bound exceeds the cutoff are pruned; with a finite cutoff
  // status `infeasible` means "no solution with objective <= cutoff".
  double objective_cutoff = kInf;
  std::optional<std::vector<double>> warm_start;
  bool paranoid = false;
};

// Signed slack per constraint: >= 0 iff satisfied (equalities report
// -|activity - rhs|).
struct FeasibilityReport {
  bool feasible = true;
  double max_violation = 0;
  struct Violation {
    int constraint = -1;  // -1: variable bound or integrality
    std::string name;
    double slack = 0;
  };
  std::vector<Violation> violations;
};

inline double constraint_slack(const Constraint& c,
                               const std::vector<double>& x) {
  double act = 0;
  for (const auto& t : c.terms) act += t.coeff * x[t.var];
  switch (c.sense) {
    case Sense::le: return c.rhs - act;
    case Sense::ge: return act - c.rhs;
    case Sense::eq: return -std::abs(act - c.rhs);
  }
  return 0;
}

inline FeasibilityReport check_point_feasible(const MilpModel& model,
                                              const std::vector<double>& point,
                                              double tol = kFeasTol) {
  if (point.size() != model.vars.size())
    throw input_error("check_point_feasible: point must assign every variable");
  FeasibilityReport rep;
  auto flag = [&](int ci, const std::string& name, double slack) {
    if (slack < -tol) {
      rep.feasible = false;
      rep.violations.push_back({ci, name, slack});
      rep.max_violation = std::max(rep.max_violation, -slack);
    }
  };
  for (int i = 0; i < static_cast<int>(model.cons.size()); ++i)
    flag(i, model.cons[i].name, constraint_slack(model.cons[i], point));
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j) {
    const auto& v = model.vars[j];
    flag(-1, v.name + ":lb", point[j] - v.lb);
    flag(-1, v.name + ":ub", v.ub - point[j]);
    if (v.kind == VarKind::binary)
      flag(-1, v.name + ":int",
           -std::abs(point[j] - std::round(point[j])));
  }
  return rep;
}

}  // namespace parabolic
