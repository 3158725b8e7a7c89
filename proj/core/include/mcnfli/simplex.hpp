// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Generalized network simplex for minimum-cost flow with linear
// interdependencies. The solver walks bases as described in basis.hpp:
// per iteration it recomputes basic values (net requirements, a small
// certificate solve, then leaf-to-root sweeps per tree), corrects dual
// potentials through the transposed certificate system, prices nonbasic
// variables, and performs a ratio-tested pivot. Either the full certificate
// matrix or its reduced form can drive the linear solves; both paths produce
// identical results and share a canonical final evaluation.

#ifndef MCNFLI_SIMPLEX_HPP_
#define MCNFLI_SIMPLEX_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "mcnfli/basis.hpp"
#include "mcnfli/instance.hpp"

namespace mcnfli {

enum class PricingRule { Dantzig, Bland };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

// Classification of a pivot: whether flow moved between forest components.
enum class PivotCase { WithinTree, BetweenTrees };

// Dual information. Node and coupling potentials are the corrected values;
// the guess and shift fields expose the two-step computation (per-tree
// propagated guesses, then a correction per tree / per coupling solved from
// the transposed certificate system).
struct PotentialState {
  std::vector<double> node;        // size m, corrected
  std::vector<double> interdep;    // size p, corrected
  std::vector<double> node_guess;  // size m, pre-correction propagation
  std::vector<double> tree_shift;  // size tree_count, last entry always 0
};

// Net requirements: per tree (all trees, including the redundant last one)
// and per interdependence.
struct NetRequirements {
  std::vector<double> tree;
  std::vector<double> interdep;
};

// A full primal point for a basis: every arc flow and coupling slack.
struct BasicValues {
  std::vector<double> arc_flow;  // size n, by arc index
  std::vector<double> slack;     // size p
  NetRequirements net;
};

// A priced-out pivot: the entering variable, the per-unit change of every
// variable, the step length, and what blocks it.
struct PivotPlan {
  VariableRef entering;
  int direction = 1;  // +1 rising from lower bound, -1 falling from upper
  double entering_reduced_cost = 0.0;
  std::vector<double> arc_delta;    // size n, per unit step (entering incl.)
  std::vector<double> slack_delta;  // size p
  double theta = 0.0;
  bool unbounded = false;
  bool bound_flip = false;          // blocking variable is the entering one
  VariableRef blocking;             // valid when !unbounded
  VarLocation blocking_bound = VarLocation::Lower;  // bound it lands on
  PivotCase case_tag = PivotCase::WithinTree;
};

// Per-iteration observation hook payload.
struct TraceRecord {
  int phase = 2;
  long iteration = 0;  // 1-based within the phase
  NetRequirements net;
  std::vector<double> arc_flow;
  std::vector<double> slack;
  PotentialState potentials;
  Matrix d;
  std::vector<VariableRef> d_cols;
  Matrix dhat;
  std::vector<VariableRef> dhat_cols;
  std::optional<PivotPlan> pivot;  // empty on the final (optimal) iteration
  double objective = 0.0;          // against real costs
};

struct SolveOptions {
  PricingRule rule = PricingRule::Dantzig;
  bool use_dhat = false;
  // After this many consecutive degenerate pivots the solver switches to the
  // smallest-index rule until a positive step occurs.
  int degenerate_switch = 50;
  // 0 means the default cap of 10*(m+p)*n pivots across both phases.
  long max_iterations = 0;
  std::function<void(const TraceRecord&)> trace;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  std::vector<double> flows;   // size n
  std::vector<double> slacks;  // size p
  double objective = 0.0;
  long iterations = 0;         // phase-2 pivots
  long phase1_iterations = 0;
};

// --- Building blocks (also used directly by tests and the trace tool) ---

// Assemble a BasisState from explicit variable sets. Arc ids not listed in
// either set rest at their lower bound. Throws SolveError on inconsistent
// input (wrong cardinality, overlapping sets, upper-bounded arc without a
// finite capacity, cyclic independent part).
BasisState make_basis(const Instance& inst,
                      const std::vector<int>& basic_arc_ids,
                      const std::vector<int>& basic_slack_indices,
                      const std::vector<int>& upper_arc_ids);

// Phase-1 setup: the instance extended with one artificial arc per non-anchor
// node (anchored at node 1) and the all-artificial starting basis.
struct Phase1Setup {
  Instance extended;
  BasisState basis;
  int first_artificial_arc = 0;  // artificial arcs have id >= this
};
Phase1Setup initial_basis(const Instance& inst);

// Net requirements of a basis (supplies plus upper-bound offsets per tree;
// intercept plus upper-bound offsets per coupling).
NetRequirements net_requirements(const Instance& inst,
                                 const BasisState& basis);

// Solve for all basic values. `cert` must belong to `basis`.
BasicValues basic_values(const Instance& inst, const BasisState& basis,
                         const CertMatrix& cert, bool use_dhat = false);

// Two-step potentials: propagate guesses per tree (roots start at 0, or at
// their previous value when `previous` is given), then correct through the
// transposed certificate system.
PotentialState compute_potentials(const Instance& inst,
                                  const BasisState& basis,
                                  const CertMatrix& cert,
                                  bool use_dhat = false,
                                  const PotentialState* previous = nullptr);

// Reduced cost of any variable under the given potentials.
double reduced_cost(const Instance& inst, const VariableRef& v,
                    const PotentialState& pot);

// Pick an entering variable, or nothing when the basis is optimal.
std::optional<VariableRef> price(const Instance& inst,
                                 const BasisState& basis,
                                 const PotentialState& pot, PricingRule rule);

// Work out the full pivot for a chosen entering variable.
PivotPlan pivot_plan(const Instance& inst, const BasisState& basis,
                     const CertMatrix& cert, const BasicValues& values,
                     const VariableRef& entering, double entering_rc,
                     bool use_dhat = false);

// --- Drivers ---

// Full solve: phase 1 from the all-artificial basis, then phase 2.
SolveResult solve(const Instance& inst, const SolveOptions& options = {});

// Phase-2-only solve from a caller-supplied primal-feasible basis.
SolveResult solve_from_basis(const Instance& inst, const BasisState& start,
                             const SolveOptions& options = {});

}  // namespace mcnfli

#endif  // MCNFLI_SIMPLEX_HPP_
