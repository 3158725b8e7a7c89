// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

namespace mcnfli {

namespace {

// Nodes ordered by decreasing depth; processing in this order folds leaves
// toward the roots.
std::vector<int> nodes_by_decreasing_depth(const Forest& forest) {
  const int m = static_cast<int>(forest.depth.size());
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return forest.depth[a] > forest.depth[b];
  });
  return order;
}

// Given per-node residuals t (everything known moved to the right-hand
// side), assign tree-arc values leaf-to-root and fold residuals upward.
// Overwrites entries of `arc_value` for forest edges only; returns nothing —
// residuals at roots are conservation slack, checked by the caller.
void sweep_tree_arcs(const Instance& inst, const Forest& forest,
                     std::vector<double>& t, std::vector<double>& arc_value) {
  const std::vector<int> order = nodes_by_decreasing_depth(forest);
  for (int v : order) {
    const int arc_id = forest.parent_arc[v];
    if (arc_id == 0) continue;  // root
    const ArcRecord& a = inst.arc(arc_id);
    // Oriented away from v: the residual leaves v through the arc.
    const double value = (a.tail == v + 1) ? t[v] : -t[v];
    arc_value[arc_id - 1] = value;
    t[forest.parent[v] - 1] += t[v];
  }
}

struct CostView {
  const std::vector<double>* costs = nullptr;  // by arc index; null = real
  const Instance* inst = nullptr;
  double arc_cost(int arc_id) const {
    return costs ? (*costs)[arc_id - 1] : inst->arc(arc_id).cost;
  }
};

double reduced_cost_impl(const Instance& inst,
                         const Instance::RoleTable& roles,
                         const CostView& cost, const VariableRef& v,
                         const PotentialState& pot) {
  if (!v.is_flow()) {
    return -pot.interdep[v.index];
  }
  const ArcRecord& a = inst.arc(v.index);
  double rc = cost.arc_cost(v.index) - (pot.node[a.tail - 1] - pot.node[a.head - 1]);
  const ArcRole role = roles.role[v.index - 1];
  if (role == ArcRole::Parent) {
    const int t = roles.interdep_index[v.index - 1];
    rc += inst.interdeps[t].alpha * pot.interdep[t];
  } else if (role == ArcRole::Child) {
    const int t = roles.interdep_index[v.index - 1];
    rc -= pot.interdep[t];
  }
  return rc;
}

PotentialState compute_potentials_impl(const Instance& inst,
                                       const BasisState& basis,
                                       const CertMatrix& cert,
                                       const CostView& cost, bool use_dhat,
                                       const PotentialState* previous) {
  const int m = inst.num_nodes();
  const int p = inst.num_interdeps();
  const Forest& forest = basis.forest;
  const int num_tree_rows = cert.r - p;

  PotentialState pot;
  pot.node_guess.assign(m, 0.0);
  pot.tree_shift.assign(forest.tree_count, 0.0);

  // Children lists in ascending node order for a deterministic propagation.
  std::vector<std::vector<int>> children(m);
  for (int v = 0; v < m; ++v) {
    if (forest.parent[v] != 0) children[forest.parent[v] - 1].push_back(v);
  }

  // Root guesses: previous value when warm-started, zero otherwise. Coupling
  // potential guesses are always zero, which keeps the correction system
  // exactly the transposed certificate.
  for (int h = 0; h < forest.tree_count; ++h) {
    const int root = forest.roots[h] - 1;
    pot.node_guess[root] = previous ? previous->node[root] : 0.0;
    // Depth-first propagation using arc costs along tree edges.
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : children[u]) {
        const ArcRecord& a = inst.arc(forest.parent_arc[v]);
        const double c = cost.arc_cost(a.id);
        // A basic arc wants reduced cost zero: c = pi_tail - pi_head.
        pot.node_guess[v] = (a.tail == v + 1) ? pot.node_guess[u] + c
                                              : pot.node_guess[u] - c;
        stack.push_back(v);
      }
    }
  }

  // Residual reduced costs of the basic coupled variables under the guesses.
  auto guess_residual = [&](const VariableRef& v) -> double {
    if (!v.is_flow()) return 0.0;  // slack cost and guessed potential both 0
    const ArcRecord& a = inst.arc(v.index);
    return cost.arc_cost(v.index) -
           (pot.node_guess[a.tail - 1] - pot.node_guess[a.head - 1]);
  };

  std::vector<double> sigma_tree(std::max(0, num_tree_rows), 0.0);
  std::vector<double> sigma_dep(p, 0.0);

  if (use_dhat) {
    const int hat_n = cert.dhat.rows();
    std::vector<double> rhs(hat_n);
    for (int i = 0; i < hat_n; ++i) rhs[i] = guess_residual(cert.dhat_cols[i]);
    std::vector<double> sol;
    if (!solve_linear_transposed(cert.dhat, std::move(rhs), sol)) {
      throw SolveError("potentials: reduced certificate is singular");
    }
    for (int h = 0; h < num_tree_rows; ++h) sigma_tree[h] = sol[h];
    for (size_t rr = 0; rr < cert.dhat_row_interdep.size(); ++rr) {
      sigma_dep[cert.dhat_row_interdep[rr]] = sol[num_tree_rows + rr];
    }
    // Loose couplings keep sigma 0: their basic slack pins the potential.
  } else {
    std::vector<double> rhs(cert.r);
    for (int i = 0; i < cert.r; ++i) rhs[i] = guess_residual(cert.col_vars[i]);
    std::vector<double> sol;
    if (!solve_linear_transposed(cert.d, std::move(rhs), sol)) {
      throw SolveError("potentials: certificate is singular");
    }
    for (int h = 0; h < num_tree_rows; ++h) sigma_tree[h] = sol[h];
    for (int t = 0; t < p; ++t) sigma_dep[t] = sol[num_tree_rows + t];
  }

  for (int h = 0; h < num_tree_rows; ++h) pot.tree_shift[h] = sigma_tree[h];
  if (forest.tree_count > 0) pot.tree_shift[forest.tree_count - 1] = 0.0;

  pot.node.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    pot.node[i] = pot.node_guess[i] + pot.tree_shift[forest.tree_of[i]];
  }
  pot.interdep = sigma_dep;
  return pot;
}

std::optional<VariableRef> price_impl(const Instance& inst,
                                      const Instance::RoleTable& roles,
                                      const CostView& cost,
                                      const BasisState& basis,
                                      const PotentialState& pot,
                                      PricingRule rule,
                                      int exclude_arcs_from) {
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();
  std::optional<VariableRef> best;
  double best_violation = 0.0;

  auto consider = [&](const VariableRef& v,
                      VarLocation loc) -> std::optional<VariableRef> {
    if (loc == VarLocation::Basic) return std::nullopt;
    const double rc = reduced_cost_impl(inst, roles, cost, v, pot);
    double violation = 0.0;
    if (loc == VarLocation::Lower && rc < -kTol) violation = -rc;
    if (loc == VarLocation::Upper && rc > kTol) violation = rc;
    if (violation <= 0.0) return std::nullopt;
    if (rule == PricingRule::Bland) return v;
    if (violation > best_violation) {
      best_violation = violation;
      best = v;
    }
    return std::nullopt;
  };

  for (int arc_id = 1; arc_id <= n; ++arc_id) {
    if (exclude_arcs_from > 0 && arc_id >= exclude_arcs_from) break;
    if (auto hit = consider(VariableRef::flow(arc_id),
                            basis.arc_loc[arc_id - 1])) {
      return hit;
    }
  }
  for (int t = 0; t < p; ++t) {
    if (auto hit = consider(VariableRef::slack(t), basis.slack_loc[t])) {
      return hit;
    }
  }
  return best;
}

double variable_value(const BasicValues& values, const VariableRef& v) {
  return v.is_flow() ? values.arc_flow[v.index - 1] : values.slack[v.index];
}

double variable_upper(const Instance& inst, const VariableRef& v) {
  return v.is_flow() ? inst.arc(v.index).capacity : kInf;
}

}  // namespace

BasisState make_basis(const Instance& inst,
                      const std::vector<int>& basic_arc_ids,
                      const std::vector<int>& basic_slack_indices,
                      const std::vector<int>& upper_arc_ids) {
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();
  BasisState basis;
  basis.arc_loc.assign(n, VarLocation::Lower);
  basis.slack_loc.assign(p, VarLocation::Lower);

  for (int arc_id : basic_arc_ids) {
    if (arc_id < 1 || arc_id > n) throw SolveError("basis: missing arc id");
    if (basis.arc_loc[arc_id - 1] != VarLocation::Lower) {
      throw SolveError("basis: arc listed twice");
    }
    basis.arc_loc[arc_id - 1] = VarLocation::Basic;
    basis.basic.push_back(VariableRef::flow(arc_id));
  }
  for (int t : basic_slack_indices) {
    if (t < 0 || t >= p) throw SolveError("basis: missing slack index");
    if (basis.slack_loc[t] != VarLocation::Lower) {
      throw SolveError("basis: slack listed twice");
    }
    basis.slack_loc[t] = VarLocation::Basic;
    basis.basic.push_back(VariableRef::slack(t));
  }
  for (int arc_id : upper_arc_ids) {
    if (arc_id < 1 || arc_id > n) throw SolveError("basis: missing arc id");
    if (basis.arc_loc[arc_id - 1] != VarLocation::Lower) {
      throw SolveError("basis: arc listed in two sets");
    }
    if (!std::isfinite(inst.arc(arc_id).capacity)) {
      throw SolveError("basis: uncapacitated arc cannot sit at upper bound");
    }
    basis.arc_loc[arc_id - 1] = VarLocation::Upper;
  }

  rebuild_forest(inst, basis);
  return basis;
}

Phase1Setup initial_basis(const Instance& inst) {
  Phase1Setup setup;
  setup.extended = inst;
  const int m = inst.num_nodes();
  setup.first_artificial_arc = inst.num_arcs() + 1;

  std::vector<int> basic_arcs;
  for (int i = 2; i <= m; ++i) {
    const double b = inst.node(i).supply;
    const int id = (b >= 0.0) ? setup.extended.add_arc(i, 1, kInf, 0.0)
                              : setup.extended.add_arc(1, i, kInf, 0.0);
    basic_arcs.push_back(id);
  }
  std::vector<int> basic_slacks(inst.num_interdeps());
  for (int t = 0; t < inst.num_interdeps(); ++t) basic_slacks[t] = t;

  setup.basis = make_basis(setup.extended, basic_arcs, basic_slacks, {});
  return setup;
}

NetRequirements net_requirements(const Instance& inst,
                                 const BasisState& basis) {
  const Forest& forest = basis.forest;
  NetRequirements net;
  net.tree.assign(forest.tree_count, 0.0);
  net.interdep.assign(inst.num_interdeps(), 0.0);

  for (int i = 0; i < inst.num_nodes(); ++i) {
    net.tree[forest.tree_of[i]] += inst.nodes[i].supply;
  }
  for (const ArcRecord& a : inst.arcs) {
    if (basis.arc_loc[a.id - 1] != VarLocation::Upper) continue;
    const int ht = forest.tree_of[a.tail - 1];
    const int hh = forest.tree_of[a.head - 1];
    if (ht == hh) continue;
    net.tree[ht] -= a.capacity;
    net.tree[hh] += a.capacity;
  }
  for (int t = 0; t < inst.num_interdeps(); ++t) {
    const Interdependence& dep = inst.interdeps[t];
    double b = dep.beta;
    if (basis.arc_loc[dep.parent - 1] == VarLocation::Upper) {
      b += dep.alpha * inst.arc(dep.parent).capacity;
    }
    if (basis.arc_loc[dep.child - 1] == VarLocation::Upper) {
      b -= inst.arc(dep.child).capacity;
    }
    net.interdep[t] = b;
  }
  return net;
}

BasicValues basic_values(const Instance& inst, const BasisState& basis,
                         const CertMatrix& cert, bool use_dhat) {
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();
  const Forest& forest = basis.forest;
  const Instance::RoleTable roles = inst.build_roles();
  const int num_tree_rows = cert.r - p;

  BasicValues values;
  values.net = net_requirements(inst, basis);
  values.arc_flow.assign(n, 0.0);
  values.slack.assign(p, 0.0);

  // Nonbasic arcs rest at their bounds.
  for (int j = 0; j < n; ++j) {
    if (basis.arc_loc[j] == VarLocation::Upper) {
      values.arc_flow[j] = inst.arcs[j].capacity;
    }
  }

  // Basic coupled variables from the certificate system.
  if (use_dhat) {
    const int hat_n = cert.dhat.rows();
    std::vector<double> rhs(hat_n);
    for (int h = 0; h < num_tree_rows; ++h) rhs[h] = values.net.tree[h];
    for (size_t rr = 0; rr < cert.dhat_row_interdep.size(); ++rr) {
      rhs[num_tree_rows + rr] = values.net.interdep[cert.dhat_row_interdep[rr]];
    }
    std::vector<double> sol;
    if (!solve_linear(cert.dhat, std::move(rhs), sol)) {
      throw SolveError("basic values: reduced certificate is singular");
    }
    for (int i = 0; i < hat_n; ++i) {
      values.arc_flow[cert.dhat_cols[i].index - 1] = sol[i];
    }
    // Loose slacks from the coupling identity; tight slacks are exactly 0.
    for (int t = 0; t < p; ++t) {
      if (basis.slack_loc[t] != VarLocation::Basic) continue;
      const Interdependence& dep = inst.interdeps[t];
      values.slack[t] = dep.beta +
                        dep.alpha * values.arc_flow[dep.parent - 1] -
                        values.arc_flow[dep.child - 1];
    }
  } else {
    std::vector<double> rhs(cert.r);
    for (int h = 0; h < num_tree_rows; ++h) rhs[h] = values.net.tree[h];
    for (int t = 0; t < p; ++t) {
      rhs[num_tree_rows + t] = values.net.interdep[t];
    }
    std::vector<double> sol;
    if (!solve_linear(cert.d, std::move(rhs), sol)) {
      throw SolveError("basic values: certificate is singular");
    }
    for (int i = 0; i < cert.r; ++i) {
      const VariableRef& v = cert.col_vars[i];
      if (v.is_flow()) {
        values.arc_flow[v.index - 1] = sol[i];
      } else {
        values.slack[v.index] = sol[i];
      }
    }
  }

  // Tree arcs via per-node residuals and leaf-to-root sweeps. Everything
  // except forest edges contributes its (now known) value.
  std::vector<double> t(inst.num_nodes());
  for (int i = 0; i < inst.num_nodes(); ++i) t[i] = inst.nodes[i].supply;
  for (const ArcRecord& a : inst.arcs) {
    const bool forest_edge = basis.arc_loc[a.id - 1] == VarLocation::Basic &&
                             roles.role[a.id - 1] == ArcRole::Independent;
    if (forest_edge) continue;
    const double val = values.arc_flow[a.id - 1];
    if (val == 0.0) continue;
    t[a.tail - 1] -= val;
    t[a.head - 1] += val;
  }
  sweep_tree_arcs(inst, forest, t, values.arc_flow);
#ifndef NDEBUG
  for (int h = 0; h < forest.tree_count; ++h) {
    assert(std::abs(t[forest.roots[h] - 1]) < 1e-6 * (1.0 + std::abs(values.net.tree[h])) &&
           "conservation residual at a tree root");
  }
#endif
  return values;
}

PotentialState compute_potentials(const Instance& inst,
                                  const BasisState& basis,
                                  const CertMatrix& cert, bool use_dhat,
                                  const PotentialState* previous) {
  CostView cost{nullptr, &inst};
  return compute_potentials_impl(inst, basis, cert, cost, use_dhat, previous);
}

double reduced_cost(const Instance& inst, const VariableRef& v,
                    const PotentialState& pot) {
  const Instance::RoleTable roles = inst.build_roles();
  CostView cost{nullptr, &inst};
  return reduced_cost_impl(inst, roles, cost, v, pot);
}

std::optional<VariableRef> price(const Instance& inst,
                                 const BasisState& basis,
                                 const PotentialState& pot,
                                 PricingRule rule) {
  const Instance::RoleTable roles = inst.build_roles();
  CostView cost{nullptr, &inst};
  return price_impl(inst, roles, cost, basis, pot, rule, 0);
}

PivotPlan pivot_plan(const Instance& inst, const BasisState& basis,
                     const CertMatrix& cert, const BasicValues& values,
                     const VariableRef& entering, double entering_rc,
                     bool use_dhat) {
  const int n = inst.num_arcs();
  const int p = inst.num_interdeps();
  const Forest& forest = basis.forest;
  const Instance::RoleTable roles = inst.build_roles();
  const int num_tree_rows = cert.r - p;

  PivotPlan plan;
  plan.entering = entering;
  plan.entering_reduced_cost = entering_rc;
  plan.direction =
      basis.location(entering) == VarLocation::Lower ? 1 : -1;
  const double dir = plan.direction;

  plan.arc_delta.assign(n, 0.0);
  plan.slack_delta.assign(p, 0.0);

  // Right-hand-side perturbation per unit step: minus the entering
  // variable's column, scaled by the direction.
  std::vector<double> full_rhs(cert.r, 0.0);
  if (entering.is_flow()) {
    const ArcRecord& a = inst.arc(entering.index);
    const int ht = forest.tree_of[a.tail - 1];
    const int hh = forest.tree_of[a.head - 1];
    if (ht != hh) {
      if (ht < num_tree_rows) full_rhs[ht] -= dir;
      if (hh < num_tree_rows) full_rhs[hh] += dir;
    }
    const ArcRole role = roles.role[entering.index - 1];
    if (role != ArcRole::Independent) {
      const int t = roles.interdep_index[entering.index - 1];
      if (role == ArcRole::Parent) {
        full_rhs[num_tree_rows + t] += inst.interdeps[t].alpha * dir;
      } else {
        full_rhs[num_tree_rows + t] -= dir;
      }
    }
    plan.arc_delta[entering.index - 1] = dir;
  } else {
    full_rhs[num_tree_rows + entering.index] -= dir;
  }

  // Deltas of the basic coupled variables.
  if (use_dhat) {
    const int hat_n = cert.dhat.rows();
    std::vector<double> rhs(hat_n);
    for (int h = 0; h < num_tree_rows; ++h) rhs[h] = full_rhs[h];
    for (size_t rr = 0; rr < cert.dhat_row_interdep.size(); ++rr) {
      rhs[num_tree_rows + rr] =
          full_rhs[num_tree_rows + cert.dhat_row_interdep[rr]];
    }
    std::vector<double> sol;
    if (!solve_linear(cert.dhat, std::move(rhs), sol)) {
      throw SolveError("pivot: reduced certificate is singular");
    }
    for (int i = 0; i < hat_n; ++i) {
      plan.arc_delta[cert.dhat_cols[i].index - 1] = sol[i];
    }
    if (entering.is_flow()) {
      // The solve may have overwritten the entering slot; it cannot, since
      // the entering variable is nonbasic, but keep the invariant explicit.
      plan.arc_delta[entering.index - 1] = dir;
    }
    // Basic slacks track the coupling identity.
    for (int t = 0; t < p; ++t) {
      if (basis.slack_loc[t] != VarLocation::Basic) continue;
      const Interdependence& dep = inst.interdeps[t];
      plan.slack_delta[t] = dep.alpha * plan.arc_delta[dep.parent - 1] -
                            plan.arc_delta[dep.child - 1];
    }
    if (!entering.is_flow()) plan.slack_delta[entering.index] = dir;
  } else {
    std::vector<double> sol;
    if (!solve_linear(cert.d, std::vector<double>(full_rhs), sol)) {
      throw SolveError("pivot: certificate is singular");
    }
    for (int i = 0; i < cert.r; ++i) {
      const VariableRef& v = cert.col_vars[i];
      if (v.is_flow()) {
        plan.arc_delta[v.index - 1] = sol[i];
      } else {
        plan.slack_delta[v.index] = sol[i];
      }
    }
    if (entering.is_flow()) {
      plan.arc_delta[entering.index - 1] = dir;
    } else {
      plan.slack_delta[entering.index] = dir;
    }
  }

  // Tree-arc deltas via sweeps: the entering arc and every moving basic
  // coupled arc perturb node residuals.
  std::vector<double> t_res(inst.num_nodes(), 0.0);
  auto add_arc_motion = [&](int arc_id, double d) {
    if (d == 0.0) return;
    const ArcRecord& a = inst.arc(arc_id);
    t_res[a.tail - 1] -= d;
    t_res[a.head - 1] += d;
  };
  if (entering.is_flow()) add_arc_motion(entering.index, dir);
  for (const VariableRef& v : cert.col_vars) {
    if (v.is_flow()) add_arc_motion(v.index, plan.arc_delta[v.index - 1]);
  }
  sweep_tree_arcs(inst, forest, t_res, plan.arc_delta);

  // Case classification: does flow transfer between forest components?
  bool between = false;
  if (entering.is_flow()) {
    const ArcRecord& a = inst.arc(entering.index);
    between = forest.tree_of[a.tail - 1] != forest.tree_of[a.head - 1];
  }
  if (!between) {
    for (const VariableRef& v : cert.col_vars) {
      if (!v.is_flow()) continue;
      if (std::abs(plan.arc_delta[v.index - 1]) <= kTol) continue;
      const ArcRecord& a = inst.arc(v.index);
      if (forest.tree_of[a.tail - 1] != forest.tree_of[a.head - 1]) {
        between = true;
        break;
      }
    }
  }
  plan.case_tag = between ? PivotCase::BetweenTrees : PivotCase::WithinTree;

  // Ratio test. Candidates: every basic variable that moves, plus the
  // entering variable against its own opposite bound.
  struct Candidate {
    VariableRef var;
    double limit;
    VarLocation bound;
  };
  std::vector<Candidate> candidates;
  for (const VariableRef& v : basis.basic) {
    const double d =
        v.is_flow() ? plan.arc_delta[v.index - 1] : plan.slack_delta[v.index];
    if (std::abs(d) <= kTol) continue;
    const double value = variable_value(values, v);
    if (d < 0.0) {
      candidates.push_back({v, std::max(0.0, value / -d), VarLocation::Lower});
    } else {
      const double cap = variable_upper(inst, v);
      if (std::isfinite(cap)) {
        candidates.push_back(
            {v, std::max(0.0, (cap - value) / d), VarLocation::Upper});
      }
    }
  }
  {
    const double cap = variable_upper(inst, entering);
    if (std::isfinite(cap)) {
      candidates.push_back({entering, cap,
                            plan.direction > 0 ? VarLocation::Upper
                                               : VarLocation::Lower});
    }
  }

  if (candidates.empty()) {
    plan.unbounded = true;
    plan.theta = kInf;
    return plan;
  }

  double min_limit = kInf;
  for (const Candidate& c : candidates) min_limit = std::min(min_limit, c.limit);
  // Smallest variable among near-ties, so both certificate paths and both
  // pricing rules block deterministically.
  const double tie_window = kTol * (1.0 + std::abs(min_limit));
  const Candidate* chosen = nullptr;
  int chosen_ord = 0;
  for (const Candidate& c : candidates) {
    if (c.limit > min_limit + tie_window) continue;
    const int ord = variable_ordinal(c.var, n);
    if (chosen == nullptr || ord < chosen_ord) {
      chosen = &c;
      chosen_ord = ord;
    }
  }
  plan.theta = std::max(0.0, chosen->limit);
  plan.blocking = chosen->var;
  plan.blocking_bound = chosen->bound;
  plan.bound_flip = chosen->var == entering;
  return plan;
}

namespace {

// Iterative driver shared by both public solve entry points.
class Engine {
 public:
  Engine(Instance instance, BasisState basis, const SolveOptions& options,
         long max_pivots)
      : inst_(std::move(instance)),
        basis_(std::move(basis)),
        options_(options),
        max_pivots_(max_pivots),
        roles_(inst_.build_roles()) {}

  Instance& instance() { return inst_; }
  const BasisState& basis() const { return basis_; }

  // Run one phase to optimality. Returns Unbounded if a pivot has no
  // blocking variable, Optimal otherwise.
  SolveStatus run_phase(int phase, const std::vector<double>* phase_costs,
                        int exclude_arcs_from, long& pivots_used) {
    CostView cost{phase_costs, &inst_};
    int consecutive_degenerate = 0;
    std::optional<PotentialState> previous;
    long iteration = 0;

    while (true) {
      if (total_pivots_ >= max_pivots_) {
        throw SolveError("iteration cap exceeded");
      }
      ++iteration;
      const CertMatrix cert = build_cert(inst_, basis_);
      const BasicValues values =
          basic_values(inst_, basis_, cert, options_.use_dhat);
      const PotentialState pot = compute_potentials_impl(
          inst_, basis_, cert, cost, options_.use_dhat,
          previous ? &*previous : nullptr);

      const PricingRule rule =
          consecutive_degenerate >= options_.degenerate_switch
              ? PricingRule::Bland
              : options_.rule;
      const std::optional<VariableRef> entering = price_impl(
          inst_, roles_, cost, basis_, pot, rule, exclude_arcs_from);

      if (!entering) {
        emit_trace(phase, iteration, cert, values, pot, std::nullopt);
        return SolveStatus::Optimal;
      }

      const double rc = reduced_cost_impl(inst_, roles_, cost, *entering, pot);
      PivotPlan plan = pivot_plan(inst_, basis_, cert, values, *entering, rc,
                                  options_.use_dhat);
      emit_trace(phase, iteration, cert, values, pot, plan);
      if (plan.unbounded) return SolveStatus::Unbounded;

      apply_pivot(plan);
      ++pivots_used;
      ++total_pivots_;
      previous = pot;
      if (plan.theta <= kTol) {
        ++consecutive_degenerate;
      } else {
        consecutive_degenerate = 0;
      }
    }
  }

  // Canonical final evaluation: both certificate paths report the values
  // computed through the full matrix, and the objective is summed in arc-id
  // order against the real costs.
  void finalize(SolveResult& result, int real_arcs) {
    const CertMatrix cert = build_cert(inst_, basis_);
    const BasicValues values =
        basic_values(inst_, basis_, cert, /*use_dhat=*/false);
    result.flows.assign(values.arc_flow.begin(),
                        values.arc_flow.begin() + real_arcs);
    result.slacks = values.slack;
    double objective = 0.0;
    for (int j = 0; j < real_arcs; ++j) {
      objective += inst_.arcs[j].cost * result.flows[j];
    }
    result.objective = objective;
  }

  double objective_against(const std::vector<double>* phase_costs) {
    const CertMatrix cert = build_cert(inst_, basis_);
    const BasicValues values =
        basic_values(inst_, basis_, cert, options_.use_dhat);
    CostView cost{phase_costs, &inst_};
    double total = 0.0;
    for (const ArcRecord& a : inst_.arcs) {
      total += cost.arc_cost(a.id) * values.arc_flow[a.id - 1];
    }
    return total;
  }

 private:
  void apply_pivot(const PivotPlan& plan) {
    if (plan.bound_flip) {
      VarLocation& loc = plan.entering.is_flow()
                             ? basis_.arc_loc[plan.entering.index - 1]
                             : basis_.slack_loc[plan.entering.index];
      loc = (loc == VarLocation::Lower) ? VarLocation::Upper
                                        : VarLocation::Lower;
      return;
    }
    // Swap: entering becomes basic, blocking lands on its bound.
    if (plan.entering.is_flow()) {
      basis_.arc_loc[plan.entering.index - 1] = VarLocation::Basic;
    } else {
      basis_.slack_loc[plan.entering.index] = VarLocation::Basic;
    }
    if (plan.blocking.is_flow()) {
      basis_.arc_loc[plan.blocking.index - 1] = plan.blocking_bound;
    } else {
      basis_.slack_loc[plan.blocking.index] = plan.blocking_bound;
    }
    for (VariableRef& v : basis_.basic) {
      if (v == plan.blocking) {
        v = plan.entering;
        break;
      }
    }
    rebuild_forest(inst_, basis_);
  }

  void emit_trace(int phase, long iteration, const CertMatrix& cert,
                  const BasicValues& values, const PotentialState& pot,
                  std::optional<PivotPlan> plan) {
    if (!options_.trace) return;
    TraceRecord rec;
    rec.phase = phase;
    rec.iteration = iteration;
    rec.net = values.net;
    rec.arc_flow = values.arc_flow;
    rec.slack = values.slack;
    rec.potentials = pot;
    rec.d = cert.d;
    rec.d_cols = cert.col_vars;
    rec.dhat = cert.dhat;
    rec.dhat_cols = cert.dhat_cols;
    rec.pivot = std::move(plan);
    double objective = 0.0;
    for (const ArcRecord& a : inst_.arcs) {
      objective += a.cost * values.arc_flow[a.id - 1];
    }
    rec.objective = objective;
    options_.trace(rec);
  }

  Instance inst_;
  BasisState basis_;
  const SolveOptions& options_;
  long max_pivots_ = 0;
  long total_pivots_ = 0;
  Instance::RoleTable roles_;
};

long default_pivot_cap(const Instance& inst, const SolveOptions& options) {
  if (options.max_iterations > 0) return options.max_iterations;
  const long m = inst.num_nodes();
  const long n = std::max(1, inst.num_arcs());
  const long p = inst.num_interdeps();
  return 10 * (m + p) * n;
}

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& options) {
  inst.validate_or_throw();
  SolveResult result;
  const int real_arcs = inst.num_arcs();

  Phase1Setup setup = initial_basis(inst);
  Engine engine(std::move(setup.extended), std::move(setup.basis), options,
                default_pivot_cap(inst, options));

  // Phase 1: artificial arcs cost one unit, everything else is free.
  std::vector<double> phase1_costs(engine.instance().num_arcs(), 0.0);
  for (int id = setup.first_artificial_arc;
       id <= engine.instance().num_arcs(); ++id) {
    phase1_costs[id - 1] = 1.0;
  }
  const SolveStatus phase1_status =
      engine.run_phase(1, &phase1_costs, 0, result.phase1_iterations);
  if (phase1_status == SolveStatus::Unbounded) {
    throw SolveError("phase 1 reported an unbounded descent");
  }

  double supply_scale = 1.0;
  for (const NodeRecord& nd : inst.nodes) supply_scale += std::abs(nd.supply);
  if (engine.objective_against(&phase1_costs) > kTol * supply_scale) {
    result.status = SolveStatus::Infeasible;
    return result;
  }

  // Phase 2: real costs; artificial arcs are pinned to zero flow and never
  // priced back in.
  for (int id = setup.first_artificial_arc;
       id <= engine.instance().num_arcs(); ++id) {
    engine.instance().arc(id).capacity = 0.0;
  }
  const SolveStatus phase2_status = engine.run_phase(
      2, nullptr, setup.first_artificial_arc, result.iterations);
  if (phase2_status == SolveStatus::Unbounded) {
    result.status = SolveStatus::Unbounded;
    return result;
  }

  result.status = SolveStatus::Optimal;
  engine.finalize(result, real_arcs);
  return result;
}

SolveResult solve_from_basis(const Instance& inst, const BasisState& start,
                             const SolveOptions& options) {
  inst.validate_or_throw();
  SolveResult result;

  BasisState basis = start;
  rebuild_forest(inst, basis);
  {
    const CertMatrix cert = build_cert(inst, basis);
    if (!is_good(cert)) {
      throw SolveError("start basis is singular");
    }
    const BasicValues values = basic_values(inst, basis, cert, false);
    double scale = 1.0;
    for (const NodeRecord& nd : inst.nodes) scale += std::abs(nd.supply);
    for (int j = 0; j < inst.num_arcs(); ++j) {
      const double x = values.arc_flow[j];
      if (x < -1e-6 * scale || x > inst.arcs[j].capacity + 1e-6 * scale) {
        throw SolveError("start basis is not primal feasible");
      }
    }
    for (double s : values.slack) {
      if (s < -1e-6 * scale) {
        throw SolveError("start basis is not primal feasible");
      }
    }
  }

  Engine engine(inst, std::move(basis), options,
                default_pivot_cap(inst, options));
  const SolveStatus status =
      engine.run_phase(2, nullptr, 0, result.iterations);
  if (status == SolveStatus::Unbounded) {
    result.status = SolveStatus::Unbounded;
    return result;
  }
  result.status = SolveStatus::Optimal;
  engine.finalize(result, inst.num_arcs());
  return result;
}

}  // namespace mcnfli
