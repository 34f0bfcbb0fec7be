// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "parabolic/milp.hpp"

namespace parabolic {

enum class LpStatus { optimal, infeasible, obj_limit, iter_limit };

// Bounded-variable dual simplex with a dense explicit basis inverse and
// sparse structural columns. Every constraint row carries a logical variable
// (a x + r = rhs), so the all-logical basis is always available and bound
// changes never invalidate the factorization. Dual feasibility is kept as
// the invariant; primal feasibility is what the iterations establish, which
// makes re-solves after branching bound changes cheap.
class LpCore {
public:
  explicit LpCore(const MilpModel& model) : model_(&model) { build(model); }

  int rows() const { return m_; }
  int total_vars() const { return ntot_; }

  void set_bound(int var, double lb, double ub) {
    lb_[var] = lb;
    ub_[var] = ub;
    if (stat_[var] == kBasic) return;
    const double target = stat_[var] == kAtLower ? lb : ub;
    move_nonbasic(var, target);
  }

  double lower_bound(int var) const { return lb_[var]; }
  double upper_bound(int var) const { return ub_[var]; }
  double value(int var) const { return x_[var]; }

  // Re-place nonbasic variables whose reduced-cost sign no longer matches
  // their bound (possible after un-fixing variables). Flips move the value to
  // the opposite bound and update the basic solution.
  void restore_dual_feasibility() {
    for (int j = 0; j < ntot_; ++j) {
      if (stat_[j] == kBasic) continue;
      if (ub_[j] - lb_[j] <= kFixTol) continue;
      if (stat_[j] == kAtLower && d_[j] < -kDualTol) {
        if (std::isfinite(ub_[j])) flip_nonbasic(j);
      } else if (stat_[j] == kAtUpper && d_[j] > kDualTol) {
        if (std::isfinite(lb_[j])) flip_nonbasic(j);
      }
    }
  }

  double objective() const {
    double z = 0;
    for (int j = 0; j < ntot_; ++j)
      if (cost_[j] != 0) z += cost_[j] * x_[j];
    return z + model_->objective_offset;
  }

  std::vector<double> structural_values() const {
    return std::vector<double>(x_.begin(), x_.begin() + nstruct_);
  }

  long iterations() const { return iters_; }
  long bound_violations() const { return bound_violations_; }
  void set_paranoid(bool on) { paranoid_ = on; }

  LpStatus solve(double objective_limit, long iter_cap,
                 std::chrono::steady_clock::time_point deadline) {
    long degenerate = 0;
    bool bland = false;
    bool infeasible_retry = false;
    int recoveries = 0;
    for (;;) {
      if (iters_ >= iter_cap) return LpStatus::iter_limit;
      if ((iters_ & 0x3f) == 0 &&
          std::chrono::steady_clock::now() > deadline)
        return LpStatus::iter_limit;
      if (objective() > objective_limit + 1e-9) return LpStatus::obj_limit;

      const int r = pick_leaving_row(bland);
      if (r < 0) {
        if (residual_ok()) return LpStatus::optimal;
        if (++recoveries > 3) return LpStatus::optimal;  // accept best effort
        refactor();
        continue;
      }

      const int leave = basis_[r];
      const bool above = x_[leave] > ub_[leave];
      const double bound = above ? ub_[leave] : lb_[leave];

      compute_row(r);
      gather_candidates(above, bland);

      int enter = -1;
      flips_.clear();
      if (!candidates_.empty()) {
        if (!bland)
          std::sort(candidates_.begin(), candidates_.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.ratio != b.ratio) return a.ratio < b.ratio;
                      return a.var < b.var;
                    });
        // Walk candidates in ratio order; flip boxed candidates whose whole
        // range is absorbed by the remaining infeasibility, else pivot.
        double remaining = x_[leave] - bound;
        for (const auto& cand : candidates_) {
          const double range = ub_[cand.var] - lb_[cand.var];
          const double a = alpha_[cand.var];
          const double capacity =
              std::isfinite(range) ? std::abs(a) * range : kInf;
          if (!bland && capacity < std::abs(remaining) - 1e-12) {
            flips_.push_back(cand.var);
            remaining += (stat_[cand.var] == kAtLower ? -a : a) * range;
            continue;
          }
          enter = cand.var;
          break;
        }
      }
      if (enter < 0) {
        // Dual ray found; refresh the factorization once to rule out drift.
        if (!infeasible_retry) {
          infeasible_retry = true;
          refactor();
          continue;
        }
        return LpStatus::infeasible;
      }
      infeasible_retry = false;

      for (int j : flips_) flip_nonbasic(j);
      const double delta = x_[leave] - bound;  // re-read after flips
      const double theta = pivot(r, enter, delta, above);
      ++iters_;

      if (std::abs(theta) < 1e-12) {
        if (++degenerate > 10L * ntot_) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      if (iters_ % kRefactorInterval == 0) refactor();
      if (paranoid_) audit_nonbasic_bounds();
    }
  }

  // Rebuild everything from the current variable status; used after severe
  // numerical trouble and at construction.
  void reset_to_logical_basis() {
    for (int j = 0; j < ntot_; ++j) {
      if (j >= nstruct_) {
        stat_[j] = kBasic;
        continue;
      }
      stat_[j] = cost_[j] >= 0 ? kAtLower : kAtUpper;
      if (stat_[j] == kAtLower && !std::isfinite(lb_[j])) stat_[j] = kAtUpper;
      if (stat_[j] == kAtUpper && !std::isfinite(ub_[j])) stat_[j] = kAtLower;
      x_[j] = stat_[j] == kAtLower ? lb_[j] : ub_[j];
    }
    for (int r = 0; r < m_; ++r) basis_[r] = nstruct_ + r;
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    recompute_basics();
    recompute_duals();
  }

private:
  static constexpr std::int8_t kBasic = 0;
  static constexpr std::int8_t kAtLower = 1;
  static constexpr std::int8_t kAtUpper = 2;
  static constexpr double kPrimalTol = 1e-7;
  static constexpr double kDualTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kFixTol = 1e-12;
  static constexpr long kRefactorInterval = 800;

  struct Candidate {
    int var;
    double ratio;
  };

  const MilpModel* model_;
  int m_ = 0, nstruct_ = 0, ntot_ = 0;
  std::vector<int> col_start_;  // structural column ranges into col_row_/val_
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  std::vector<double> lb_, ub_;

  std::vector<int> basis_;
  std::vector<std::int8_t> stat_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<double> binv_;

  std::vector<double> rho_;    // row r of the basis inverse
  std::vector<double> alpha_;  // pivot row entries per variable
  std::vector<int> alpha_nz_;
  std::vector<Candidate> candidates_;
  std::vector<int> flips_;
  std::vector<double> work_;

  long iters_ = 0;
  long bound_violations_ = 0;
  bool paranoid_ = false;

  void build(const MilpModel& model) {
    model.validate();
    m_ = static_cast<int>(model.cons.size());
    nstruct_ = static_cast<int>(model.vars.size());
    ntot_ = nstruct_ + m_;

    // Column-wise copy of the constraint matrix.
    std::vector<std::vector<std::pair<int, double>>> cols(nstruct_);
    rhs_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      rhs_[r] = model.cons[r].rhs;
      for (const auto& t : model.cons[r].terms)
        if (t.coeff != 0) cols[t.var].push_back({r, t.coeff});
    }
    col_start_.assign(nstruct_ + 1, 0);
    for (int j = 0; j < nstruct_; ++j)
      col_start_[j + 1] = col_start_[j] + static_cast<int>(cols[j].size());
    col_row_.resize(col_start_[nstruct_]);
    col_val_.resize(col_start_[nstruct_]);
    for (int j = 0; j < nstruct_; ++j) {
      int k = col_start_[j];
      for (auto& [r, v] : cols[j]) {
        col_row_[k] = r;
        col_val_[k] = v;
        ++k;
      }
    }

    cost_.assign(ntot_, 0.0);
    for (const auto& t : model.objective) cost_[t.var] += t.coeff;
    lb_.resize(ntot_);
    ub_.resize(ntot_);
    for (int j = 0; j < nstruct_; ++j) {
      lb_[j] = model.vars[j].lb;
      ub_[j] = model.vars[j].ub;
    }
    for (int r = 0; r < m_; ++r) {
      switch (model.cons[r].sense) {
        case Sense::le: lb_[nstruct_ + r] = 0; ub_[nstruct_ + r] = kInf; break;
        case Sense::ge: lb_[nstruct_ + r] = -kInf; ub_[nstruct_ + r] = 0; break;
        case Sense::eq: lb_[nstruct_ + r] = 0; ub_[nstruct_ + r] = 0; break;
      }
    }

    basis_.resize(m_);
    stat_.assign(ntot_, kAtLower);
    x_.assign(ntot_, 0.0);
    d_.assign(ntot_, 0.0);
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    rho_.resize(m_);
    alpha_.assign(ntot_, 0.0);
    work_.resize(m_);
    reset_to_logical_basis();
  }

  // x_B = Binv (b - sum over nonbasic A_j x_j)
  void recompute_basics() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < ntot_; ++j) {
      if (stat_[j] == kBasic || x_[j] == 0) continue;
      add_column_times(j, -x_[j], r);
    }
    for (int i = 0; i < m_; ++i) {
      double s = 0;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) s += row[k] * r[k];
      x_[basis_[i]] = s;
    }
  }

  void recompute_duals() {
    // y = c_B^T Binv, d_j = c_j - y A_j
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
    }
    for (int j = 0; j < ntot_; ++j) {
      if (stat_[j] == kBasic) {
        d_[j] = 0;
        continue;
      }
      d_[j] = cost_[j] - dot_column(j, y);
    }
  }

  void add_column_times(int j, double scale, std::vector<double>& out) const {
    if (j >= nstruct_) {
      out[j - nstruct_] += scale;
      return;
    }
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
      out[col_row_[k]] += scale * col_val_[k];
  }

  double dot_column(int j, const std::vector<double>& vec) const {
    if (j >= nstruct_) return vec[j - nstruct_];
    double s = 0;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
      s += vec[col_row_[k]] * col_val_[k];
    return s;
  }

  // work_ = Binv A_j
  void ftran_column(int j) {
    if (j >= nstruct_) {
      const int row = j - nstruct_;
      for (int i = 0; i < m_; ++i)
        work_[i] = binv_[static_cast<std::size_t>(i) * m_ + row];
      return;
    }
    std::fill(work_.begin(), work_.end(), 0.0);
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      const double v = col_val_[k];
      const int row = col_row_[k];
      const std::size_t off = row;
      for (int i = 0; i < m_; ++i)
        work_[i] += v * binv_[static_cast<std::size_t>(i) * m_ + off];
    }
  }

  void move_nonbasic(int var, double target) {
    const double delta = target - x_[var];
    if (delta == 0) return;
    x_[var] = target;
    ftran_column(var);
    for (int i = 0; i < m_; ++i)
      if (work_[i] != 0) x_[basis_[i]] -= work_[i] * delta;
  }

  void flip_nonbasic(int var) {
    const double target = stat_[var] == kAtLower ? ub_[var] : lb_[var];
    stat_[var] = stat_[var] == kAtLower ? kAtUpper : kAtLower;
    move_nonbasic(var, target);
  }

  double primal_tol(int var) const {
    double scale = 1.0;
    if (std::isfinite(lb_[var])) scale = std::max(scale, std::abs(lb_[var]));
    if (std::isfinite(ub_[var])) scale = std::max(scale, std::abs(ub_[var]));
    return kPrimalTol * scale;
  }

  int pick_leaving_row(bool bland) const {
    int best = -1;
    double best_viol = 0;
    for (int r = 0; r < m_; ++r) {
      const int v = basis_[r];
      const double tol = primal_tol(v);
      double viol = 0;
      if (x_[v] < lb_[v] - tol)
        viol = lb_[v] - x_[v];
      else if (x_[v] > ub_[v] + tol)
        viol = x_[v] - ub_[v];
      if (viol <= 0) continue;
      if (bland) {
        if (best < 0 || v < basis_[best]) best = r;
      } else if (viol > best_viol) {
        best_viol = viol;
        best = r;
      }
    }
    return best;
  }

  void compute_row(int r) {
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    std::copy(row, row + m_, rho_.begin());
    for (int nz : alpha_nz_) alpha_[nz] = 0;
    alpha_nz_.clear();
    for (int j = 0; j < nstruct_; ++j) {
      if (stat_[j] == kBasic) continue;
      double s = 0;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        s += rho_[col_row_[k]] * col_val_[k];
      if (s != 0) {
        alpha_[j] = s;
        alpha_nz_.push_back(j);
      }
    }
    for (int r2 = 0; r2 < m_; ++r2) {
      const int j = nstruct_ + r2;
      if (stat_[j] == kBasic) continue;
      if (rho_[r2] != 0) {
        alpha_[j] = rho_[r2];
        alpha_nz_.push_back(j);
      }
    }
  }

  void gather_candidates(bool leaving_above_upper, bool bland) {
    candidates_.clear();
    for (int j : alpha_nz_) {
      if (ub_[j] - lb_[j] <= kFixTol) continue;
      const double a = alpha_[j];
      if (std::abs(a) < kPivotTol) continue;
      bool ok;
      if (leaving_above_upper)
        ok = (stat_[j] == kAtLower && a > 0) || (stat_[j] == kAtUpper && a < 0);
      else
        ok = (stat_[j] == kAtLower && a < 0) || (stat_[j] == kAtUpper && a > 0);
      if (!ok) continue;
      candidates_.push_back({j, std::abs(d_[j] / a)});
    }
    if (bland)
      std::sort(candidates_.begin(), candidates_.end(),
                [](const Candidate& a, const Candidate& b) {
                  return a.var < b.var;
                });
  }

  // Returns the dual step theta.
  double pivot(int r, int enter, double delta, bool leaving_above_upper) {
    const int leave = basis_[r];
    ftran_column(enter);
    double piv = work_[r];
    if (std::abs(piv) < 1e-12) piv = alpha_[enter];

    const double step = delta / piv;
    for (int i = 0; i < m_; ++i)
      if (work_[i] != 0) x_[basis_[i]] -= work_[i] * step;
    x_[enter] += step;

    const double theta = d_[enter] / piv;
    for (int j : alpha_nz_)
      if (stat_[j] != kBasic) d_[j] -= theta * alpha_[j];
    d_[leave] = -theta;
    d_[enter] = 0;

    x_[leave] = leaving_above_upper ? ub_[leave] : lb_[leave];
    stat_[leave] = leaving_above_upper ? kAtUpper : kAtLower;
    stat_[enter] = kBasic;
    basis_[r] = enter;

    // Elementary row update of the inverse.
    double* prow = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv_piv = 1.0 / piv;
    for (int k = 0; k < m_; ++k) prow[k] *= inv_piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = work_[i];
      if (f == 0) continue;
      double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    return theta;
  }

  bool residual_ok() {
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < ntot_; ++j)
      if (x_[j] != 0) add_column_times(j, x_[j], act);
    double worst = 0;
    for (int r = 0; r < m_; ++r)
      worst = std::max(worst, std::abs(act[r] - rhs_[r]));
    return worst <= 1e-6;
  }

  void refactor() {
    // Invert the basis matrix by Gauss-Jordan with partial pivoting.
    const std::size_t mm = static_cast<std::size_t>(m_) * m_;
    std::vector<double> mat(mm, 0.0);
    for (int c = 0; c < m_; ++c) {
      const int j = basis_[c];
      if (j >= nstruct_) {
        mat[static_cast<std::size_t>(j - nstruct_) * m_ + c] = 1.0;
      } else {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
          mat[static_cast<std::size_t>(col_row_[k]) * m_ + c] = col_val_[k];
      }
    }
    std::vector<double> inv(mm, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    std::vector<int> perm(m_);
    for (int col = 0; col < m_; ++col) {
      int piv_row = col;
      double best = std::abs(mat[static_cast<std::size_t>(col) * m_ + col]);
      for (int i = col + 1; i < m_; ++i) {
        const double v = std::abs(mat[static_cast<std::size_t>(i) * m_ + col]);
        if (v > best) {
          best = v;
          piv_row = i;
        }
      }
      if (best < 1e-12) {
        reset_to_logical_basis();
        return;
      }
      if (piv_row != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(mat[static_cast<std::size_t>(piv_row) * m_ + k],
                    mat[static_cast<std::size_t>(col) * m_ + k]);
          std::swap(inv[static_cast<std::size_t>(piv_row) * m_ + k],
                    inv[static_cast<std::size_t>(col) * m_ + k]);
        }
      }
      double* mrow = &mat[static_cast<std::size_t>(col) * m_];
      double* irow = &inv[static_cast<std::size_t>(col) * m_];
      const double s = 1.0 / mrow[col];
      for (int k = 0; k < m_; ++k) {
        mrow[k] *= s;
        irow[k] *= s;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = mat[static_cast<std::size_t>(i) * m_ + col];
        if (f == 0) continue;
        double* mr = &mat[static_cast<std::size_t>(i) * m_];
        double* ir = &inv[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) {
          mr[k] -= f * mrow[k];
          ir[k] -= f * irow[k];
        }
      }
    }
    binv_ = std::move(inv);
    recompute_basics();
    recompute_duals();
  }

  void audit_nonbasic_bounds() {
    for (int j = 0; j < ntot_; ++j) {
      if (stat_[j] == kBasic) continue;
      if (x_[j] < lb_[j] - 1e-9 || x_[j] > ub_[j] + 1e-9) ++bound_violations_;
    }
  }
};

}  // namespace parabolic
