// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "parabolic/milp.hpp"
#include "parabolic/simplex.hpp"

namespace parabolic {

namespace detail {

struct BnbNode {
  double bound;
  long seq;
  int parent;
  int var;   // branched variable, -1 at root
  int val;   // fixed value
};

struct NodeOrder {
  const std::vector<BnbNode>* nodes;
  // Best bound first; ties explored depth-first (most recent node wins).
  bool operator()(int a, int b) const {
    const auto& na = (*nodes)[a];
    const auto& nb = (*nodes)[b];
    if (na.bound != nb.bound) return na.bound > nb.bound;
    return na.seq < nb.seq;
  }
};

}  // namespace detail

// Best-first branch and bound over the bounded-variable dual simplex.
// Branching fixes the most-fractional binary; equal-objective incumbents are
// resolved toward larger values on earlier-declared binaries, which makes
// results reproducible across runs.
class MilpSolver {
public:
  MilpSolver(const MilpModel& model, const MilpLimits& limits)
      : model_(model), limits_(limits) {}

  MilpSolution run() {
    MilpSolution out;
    const auto t0 = std::chrono::steady_clock::now();
    model_.validate();

    if (model_.binary_count() > limits_.binary_cap ||
        model_.continuous_count() > limits_.continuous_cap) {
      out.status = SolveStatus::size_limit;
      return out;
    }

    deadline_ = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(limits_.time_sec));
    core_ = std::make_unique<LpCore>(model_);
    core_->set_paranoid(limits_.paranoid);
    for (int j = 0; j < static_cast<int>(model_.vars.size()); ++j)
      if (model_.vars[j].kind == VarKind::binary) binaries_.push_back(j);
    fixed_.assign(binaries_.size(), -1);
    out.stats.cutoff_active = std::isfinite(limits_.objective_cutoff);

    if (limits_.warm_start) seed_incumbent(*limits_.warm_start);

    nodes_.push_back({-kInf, 0, -1, -1, 0});
    std::priority_queue<int, std::vector<int>, detail::NodeOrder> queue(
        detail::NodeOrder{&nodes_});
    queue.push(0);

    bool timed_out = false;
    bool first = true;
    while (!queue.empty()) {
      if (stats_.nodes >= limits_.node_cap ||
          std::chrono::steady_clock::now() > deadline_) {
        timed_out = true;
        break;
      }
      const int id = queue.top();
      queue.pop();
      if (nodes_[id].bound >= prune_limit()) continue;
      ++stats_.nodes;

      jump_to(id);
      const LpStatus lp = solve_lp(prune_limit());
      if (first) {
        stats_.root_lp_objective =
            lp == LpStatus::optimal ? core_->objective()
                                    : std::numeric_limits<double>::quiet_NaN();
        first = false;
      }
      if (lp == LpStatus::infeasible || lp == LpStatus::obj_limit) continue;
      if (lp == LpStatus::iter_limit) {
        timed_out = true;
        break;
      }
      const double obj = core_->objective();
      if (obj >= prune_limit()) continue;

      const int frac = most_fractional();
      if (frac < 0) {
        accept_incumbent();
        // With a finite cutoff the caller only asks whether a solution at or
        // below it exists, so the first such incumbent ends the search.
        if (std::isfinite(limits_.objective_cutoff) &&
            incumbent_obj_ <= limits_.objective_cutoff)
          break;
        continue;
      }

      const double x = core_->value(binaries_[frac]);
      if (stats_.nodes == 1 || stats_.nodes % 256 == 0) {
        dive(id);
        if (std::isfinite(limits_.objective_cutoff) && have_incumbent_ &&
            incumbent_obj_ <= limits_.objective_cutoff)
          break;
      }

      const int near = x >= 0.5 ? 1 : 0;
      const int far_id = add_node(id, frac, 1 - near, obj);
      const int near_id = add_node(id, frac, near, obj);
      queue.push(far_id);
      queue.push(near_id);
    }

    out.stats = stats_;
    out.stats.simplex_iterations = core_->iterations();
    out.stats.bound_violations = core_->bound_violations();
    out.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (have_incumbent_) {
      out.assignment = incumbent_;
      out.objective = incumbent_obj_;
      out.status = timed_out ? SolveStatus::time_limit : SolveStatus::optimal;
      if (!timed_out && incumbent_obj_ <= limits_.objective_cutoff)
        out.status = SolveStatus::optimal;
    } else {
      out.status =
          timed_out ? SolveStatus::time_limit : SolveStatus::infeasible;
    }
    return out;
  }

private:
  const MilpModel& model_;
  MilpLimits limits_;
  std::unique_ptr<LpCore> core_;
  std::vector<int> binaries_;
  std::vector<std::int8_t> fixed_;  // current solver state per binary
  std::vector<detail::BnbNode> nodes_;
  SolveStats stats_;
  std::chrono::steady_clock::time_point deadline_;

  bool have_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;

  double prune_limit() const {
    double lim = limits_.objective_cutoff;
    if (std::isfinite(lim)) lim += 1e-9;  // keep nodes at exactly the cutoff
    if (have_incumbent_) lim = std::min(lim, incumbent_obj_ + kOptGapTol);
    return lim;
  }

  LpStatus solve_lp(double limit) {
    return core_->solve(limit, 4000000L, deadline_);
  }

  void seed_incumbent(const std::vector<double>& point) {
    if (point.size() != model_.vars.size()) return;
    const auto rep = check_point_feasible(model_, point, kFeasTol);
    if (!rep.feasible) return;
    incumbent_ = point;
    incumbent_obj_ = model_.objective_value(point);
    have_incumbent_ = true;
  }

  void jump_to(int id) {
    std::vector<std::int8_t> want(binaries_.size(), -1);
    for (int cur = id; cur > 0; cur = nodes_[cur].parent)
      if (want[nodes_[cur].var] < 0)
        want[nodes_[cur].var] = static_cast<std::int8_t>(nodes_[cur].val);
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (fixed_[k] == want[k]) continue;
      const int var = binaries_[k];
      if (want[k] < 0)
        core_->set_bound(var, model_.vars[var].lb, model_.vars[var].ub);
      else
        core_->set_bound(var, want[k], want[k]);
      fixed_[k] = want[k];
    }
    core_->restore_dual_feasibility();
  }

  int most_fractional() const {
    int best = -1;
    double best_frac = kFeasTol;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      const double x = core_->value(binaries_[k]);
      const double frac = std::min(x, 1.0 - x);
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = static_cast<int>(k);
      }
    }
    return best;
  }

  void accept_incumbent() {
    std::vector<double> point = core_->structural_values();
    for (int var : binaries_) point[var] = std::round(point[var]);
    const double obj = model_.objective_value(point);
    bool take = false;
    if (!have_incumbent_ || obj < incumbent_obj_ - kOptGapTol) {
      take = true;
    } else if (obj <= incumbent_obj_ + kOptGapTol) {
      // Tie: prefer the assignment whose earliest differing binary is larger.
      for (int var : binaries_) {
        const double a = point[var], b = incumbent_[var];
        if (std::abs(a - b) > 0.5) {
          take = a > b;
          break;
        }
      }
    }
    if (take) {
      incumbent_ = std::move(point);
      incumbent_obj_ = obj;
      have_incumbent_ = true;
    }
  }

  // Round-and-refix walk from the current LP point; any integral endpoint
  // becomes an incumbent. All dive fixings are undone afterwards.
  void dive(int node_id) {
    std::vector<std::pair<int, std::int8_t>> touched;
    for (std::size_t step = 0; step <= binaries_.size(); ++step) {
      const int frac = most_fractional();
      if (frac < 0) {
        accept_incumbent();
        break;
      }
      const int var = binaries_[frac];
      const int val = core_->value(var) >= 0.5 ? 1 : 0;
      touched.push_back({frac, fixed_[frac]});
      core_->set_bound(var, val, val);
      fixed_[frac] = static_cast<std::int8_t>(val);
      core_->restore_dual_feasibility();
      const LpStatus lp = solve_lp(prune_limit());
      if (lp != LpStatus::optimal || core_->objective() >= prune_limit())
        break;
    }
    for (auto it = touched.rbegin(); it != touched.rend(); ++it) {
      const int var = binaries_[it->first];
      if (it->second < 0)
        core_->set_bound(var, model_.vars[var].lb, model_.vars[var].ub);
      else
        core_->set_bound(var, it->second, it->second);
      fixed_[it->first] = it->second;
    }
    core_->restore_dual_feasibility();
    (void)node_id;
  }

  int add_node(int parent, int var, int val, double bound) {
    nodes_.push_back({bound, static_cast<long>(nodes_.size()), parent, var, val});
    return static_cast<int>(nodes_.size()) - 1;
  }
};

inline MilpSolution solve_milp(const MilpModel& model,
                               const MilpLimits& limits = {}) {
  MilpSolver solver(model, limits);
  return solver.run();
}

}  // namespace parabolic
