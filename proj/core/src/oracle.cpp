// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mcnfli::oracle {

namespace {

// Self-contained Gaussian elimination (the oracle must not share linear
// algebra with the solver under test).
bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> rhs,
                 std::vector<double>& x, double tol) {
  const int n = static_cast<int>(a.size());
  x.assign(n, 0.0);
  for (int col = 0; col < n; ++col) {
    int best = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    }
    if (std::abs(a[best][col]) <= tol) return false;
    std::swap(a[best], a[col]);
    std::swap(rhs[best], rhs[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return true;
}

enum class ColState : char { Lower, Upper, Basic };

// Bounded-variable primal simplex with the smallest-index rule. The basis
// matrix is factored fresh every iteration, which is fine at oracle scale.
class DenseSimplex {
 public:
  explicit DenseSimplex(const DenseLP& lp) : lp_(lp) {}

  SolveResult run() {
    const int m = lp_.rows;
    const int n = lp_.cols;
    const int total = n + m;  // structural + one artificial per row

    a_.assign(m, std::vector<double>(total, 0.0));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) a_[r][c] = lp_.a[r][c];
      a_[r][n + r] = lp_.rhs[r] >= 0.0 ? 1.0 : -1.0;
    }
    upper_.assign(total, kInf);
    for (int c = 0; c < n; ++c) upper_[c] = lp_.upper[c];

    state_.assign(total, ColState::Lower);
    basis_.resize(m);
    x_.assign(total, 0.0);
    for (int r = 0; r < m; ++r) {
      basis_[r] = n + r;
      state_[n + r] = ColState::Basic;
      x_[n + r] = std::abs(lp_.rhs[r]);
    }

    // Phase 1: drive the artificials to zero.
    cost_.assign(total, 0.0);
    for (int r = 0; r < m; ++r) cost_[n + r] = 1.0;
    SolveResult result;
    if (!iterate(/*price_limit=*/total, result)) return result;

    double infeasibility = 0.0;
    for (int r = 0; r < m; ++r) infeasibility += x_[n + r];
    double scale = 1.0;
    for (double b : lp_.rhs) scale += std::abs(b);
    if (infeasibility > kTol * scale) {
      result.status = SolveStatus::Infeasible;
      return result;
    }

    // Phase 2: real costs; artificials frozen at zero and never priced.
    for (int c = 0; c < n; ++c) cost_[c] = lp_.cost[c];
    for (int r = 0; r < m; ++r) {
      cost_[n + r] = 0.0;
      upper_[n + r] = 0.0;
    }
    if (!iterate(/*price_limit=*/n, result)) return result;

    refine();
    result.status = SolveStatus::Optimal;
    const int flows = lp_.num_flows > 0 ? lp_.num_flows : n;
    result.flows.assign(x_.begin(), x_.begin() + flows);
    result.slacks.assign(x_.begin() + flows, x_.begin() + n);
    double objective = 0.0;
    for (int c = 0; c < n; ++c) objective += lp_.cost[c] * x_[c];
    result.objective = objective;
    result.iterations = iterations_;
    return result;
  }

 private:
  // Runs one phase to its optimum. Returns false when a terminal status was
  // written to `result` (unboundedness).
  bool iterate(int price_limit, SolveResult& result) {
    const int m = lp_.rows;
    const long cap = 20000 + 200L * (lp_.rows + lp_.cols);
    std::vector<double> y, d;

    while (true) {
      if (iterations_ >= cap) {
        throw SolveError("dense oracle: iteration cap exceeded");
      }

      std::vector<std::vector<double>> b(m, std::vector<double>(m));
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) b[r][c] = a_[r][basis_[c]];
      }

      // Duals: transpose(B) y = c_B.
      std::vector<std::vector<double>> bt(m, std::vector<double>(m));
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) bt[r][c] = b[c][r];
      }
      std::vector<double> cb(m);
      for (int r = 0; r < m; ++r) cb[r] = cost_[basis_[r]];
      if (!gauss_solve(bt, cb, y, kTol)) {
        throw SolveError("dense oracle: singular basis");
      }

      // Smallest-index entering variable.
      int entering = -1;
      int dir = 0;
      for (int j = 0; j < price_limit; ++j) {
        if (state_[j] == ColState::Basic) continue;
        double rc = cost_[j];
        for (int r = 0; r < m; ++r) rc -= y[r] * a_[r][j];
        if (state_[j] == ColState::Lower && rc < -kTol) {
          entering = j;
          dir = 1;
          break;
        }
        if (state_[j] == ColState::Upper && rc > kTol) {
          entering = j;
          dir = -1;
          break;
        }
      }
      if (entering < 0) return true;  // phase optimal

      // Basic values move by -dir*theta*d with d = inv(B) * column.
      std::vector<double> col(m);
      for (int r = 0; r < m; ++r) col[r] = a_[r][entering];
      if (!gauss_solve(b, col, d, kTol)) {
        throw SolveError("dense oracle: singular basis");
      }

      // Ratio test: candidates are (limit, variable, row, bound reached).
      struct Candidate {
        double limit;
        int var;
        int row;  // -1 for the entering variable itself
        ColState bound;
      };
      std::vector<Candidate> candidates;
      if (std::isfinite(upper_[entering])) {
        candidates.push_back({upper_[entering], entering, -1,
                              dir > 0 ? ColState::Upper : ColState::Lower});
      }
      for (int r = 0; r < m; ++r) {
        const double coeff = -dir * d[r];
        const int var = basis_[r];
        if (coeff < -kTol) {
          candidates.push_back(
              {std::max(0.0, x_[var] / -coeff), var, r, ColState::Lower});
        } else if (coeff > kTol && std::isfinite(upper_[var])) {
          candidates.push_back(
              {std::max(0.0, (upper_[var] - x_[var]) / coeff), var, r,
               ColState::Upper});
        }
      }
      if (candidates.empty()) {
        result.status = SolveStatus::Unbounded;
        return false;
      }
      double min_limit = kInf;
      for (const Candidate& c : candidates) {
        min_limit = std::min(min_limit, c.limit);
      }
      const double tie = kTol * (1.0 + std::abs(min_limit));
      const Candidate* chosen = nullptr;
      for (const Candidate& c : candidates) {
        if (c.limit > min_limit + tie) continue;
        if (chosen == nullptr || c.var < chosen->var) chosen = &c;
      }

      const double theta = std::max(0.0, chosen->limit);
      x_[entering] += dir * theta;
      for (int r = 0; r < m; ++r) x_[basis_[r]] -= dir * theta * d[r];
      ++iterations_;

      if (chosen->row < 0) {
        // Bound-to-bound move of the entering variable.
        state_[entering] = dir > 0 ? ColState::Upper : ColState::Lower;
        x_[entering] = dir > 0 ? upper_[entering] : 0.0;
        continue;
      }
      const int leaving = chosen->var;
      state_[leaving] = chosen->bound;
      x_[leaving] = chosen->bound == ColState::Upper ? upper_[leaving] : 0.0;
      state_[entering] = ColState::Basic;
      basis_[chosen->row] = entering;
    }
  }

  // Final polish: recompute basic values from the bound-resting variables to
  // shed incremental drift.
  void refine() {
    const int m = lp_.rows;
    for (int c = 0; c < static_cast<int>(upper_.size()); ++c) {
      if (state_[c] == ColState::Basic) continue;
      x_[c] = state_[c] == ColState::Upper ? upper_[c] : 0.0;
    }
    std::vector<double> rhs(m);
    for (int r = 0; r < m; ++r) {
      double acc = lp_.rhs[r];
      for (int c = 0; c < static_cast<int>(upper_.size()); ++c) {
        if (state_[c] != ColState::Basic && x_[c] != 0.0) {
          acc -= a_[r][c] * x_[c];
        }
      }
      rhs[r] = acc;
    }
    std::vector<std::vector<double>> b(m, std::vector<double>(m));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) b[r][c] = a_[r][basis_[c]];
    }
    std::vector<double> xb;
    if (gauss_solve(b, rhs, xb, kTol)) {
      for (int c = 0; c < m; ++c) x_[basis_[c]] = xb[c];
    }
  }

  const DenseLP& lp_;
  std::vector<std::vector<double>> a_;
  std::vector<double> upper_, cost_, x_;
  std::vector<int> basis_;
  std::vector<ColState> state_;
  long iterations_ = 0;
};

}  // namespace

DenseLP assemble(const Instance& inst) {
  const int m = inst.num_nodes();
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();

  DenseLP lp;
  lp.rows = m + p;
  lp.cols = n + p;
  lp.num_flows = n;
  lp.a.assign(lp.rows, std::vector<double>(lp.cols, 0.0));
  lp.rhs.assign(lp.rows, 0.0);
  lp.cost.assign(lp.cols, 0.0);
  lp.upper.assign(lp.cols, kInf);

  for (const ArcRecord& a : inst.arcs) {
    lp.a[a.tail - 1][a.id - 1] += 1.0;
    lp.a[a.head - 1][a.id - 1] -= 1.0;
    lp.cost[a.id - 1] = a.cost;
    lp.upper[a.id - 1] = a.capacity;
  }
  for (int i = 0; i < m; ++i) lp.rhs[i] = inst.nodes[i].supply;
  for (int t = 0; t < p; ++t) {
    const Interdependence& dep = inst.interdeps[t];
    lp.a[m + t][dep.parent - 1] = -dep.alpha;
    lp.a[m + t][dep.child - 1] = 1.0;
    lp.a[m + t][n + t] = 1.0;
    lp.rhs[m + t] = dep.beta;
  }
  return lp;
}

int dense_rank(const std::vector<std::vector<double>>& mat, double tol) {
  std::vector<std::vector<double>> a = mat;
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  int rank = 0;
  int pr = 0;
  for (int col = 0; col < cols && pr < rows; ++col) {
    int best = pr;
    for (int r = pr + 1; r < rows; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    }
    if (std::abs(a[best][col]) <= tol) continue;
    std::swap(a[best], a[pr]);
    for (int r = pr + 1; r < rows; ++r) {
      const double f = a[r][col] / a[pr][col];
      if (f == 0.0) continue;
      for (int c = col; c < cols; ++c) a[r][c] -= f * a[pr][c];
    }
    ++pr;
    ++rank;
  }
  return rank;
}

bool dense_basis_nonsingular(const Instance& inst,
                             const std::vector<VariableRef>& vars) {
  const DenseLP lp = assemble(inst);
  const int want = inst.num_nodes() + inst.num_interdeps() - 1;
  if (static_cast<int>(vars.size()) != want) return false;

  std::vector<std::vector<double>> cols(lp.rows,
                                        std::vector<double>(vars.size(), 0.0));
  for (size_t k = 0; k < vars.size(); ++k) {
    const int col = vars[k].is_flow() ? vars[k].index - 1
                                      : inst.num_arcs() + vars[k].index;
    for (int r = 0; r < lp.rows; ++r) cols[r][k] = lp.a[r][col];
  }
  return dense_rank(cols, kTol) == want;
}

SolveResult solve_dense(const DenseLP& lp) {
  DenseSimplex simplex(lp);
  return simplex.run();
}

BruteForceResult brute_force_bidm(const Instance& inst) {
  const int m = inst.num_nodes();
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();
  if (p > 20) {
    throw SolveError("brute force: too many interdependencies (p > 20)");
  }

  BruteForceResult best;
  best.status = SolveStatus::Infeasible;

  for (long mask = 0; mask < (1L << p); ++mask) {
    // Fixed-y pure flow problem over all n arcs: a disabled child keeps its
    // column with zero width, a saturated parent is substituted out through
    // the right-hand side.
    DenseLP lp;
    lp.rows = m;
    lp.cols = n;
    lp.num_flows = n;
    lp.a.assign(m, std::vector<double>(n, 0.0));
    lp.rhs.assign(m, 0.0);
    lp.cost.assign(n, 0.0);
    lp.upper.assign(n, kInf);
    for (const ArcRecord& a : inst.arcs) {
      lp.a[a.tail - 1][a.id - 1] += 1.0;
      lp.a[a.head - 1][a.id - 1] -= 1.0;
      lp.cost[a.id - 1] = a.cost;
      lp.upper[a.id - 1] = a.capacity;
    }
    for (int i = 0; i < m; ++i) lp.rhs[i] = inst.nodes[i].supply;

    double cost_const = 0.0;
    std::vector<double> fixed_flow(n, -1.0);  // -1: not fixed
    for (int t = 0; t < p; ++t) {
      const Interdependence& dep = inst.interdeps[t];
      if (mask & (1L << t)) {
        const ArcRecord& parent = inst.arc(dep.parent);
        lp.rhs[parent.tail - 1] -= parent.capacity;
        lp.rhs[parent.head - 1] += parent.capacity;
        cost_const += parent.cost * parent.capacity;
        lp.upper[dep.parent - 1] = 0.0;
        fixed_flow[dep.parent - 1] = parent.capacity;
      } else {
        lp.upper[dep.child - 1] = 0.0;
        fixed_flow[dep.child - 1] = 0.0;
      }
    }

    const SolveResult sub = solve_dense(lp);
    if (sub.status == SolveStatus::Unbounded) {
      BruteForceResult out;
      out.status = SolveStatus::Unbounded;
      return out;
    }
    if (sub.status != SolveStatus::Optimal) continue;

    const double objective = sub.objective + cost_const;
    if (best.status != SolveStatus::Optimal || objective < best.objective) {
      best.status = SolveStatus::Optimal;
      best.objective = objective;
      best.y.assign(p, 0);
      for (int t = 0; t < p; ++t) best.y[t] = (mask >> t) & 1;
      best.flows = sub.flows;
      for (int j = 0; j < n; ++j) {
        if (fixed_flow[j] > 0.0) best.flows[j] = fixed_flow[j];
      }
    }
  }
  return best;
}

}  // namespace mcnfli::oracle
