// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Binary-coupling machinery: the linear relaxation of a binary instance,
// randomized rounding of the relaxation's saturation pattern, and an exact
// best-first branch-and-bound over the coupling binaries.

#ifndef MCNFLI_APPROX_HPP_
#define MCNFLI_APPROX_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "mcnfli/instance.hpp"
#include "mcnfli/simplex.hpp"

namespace mcnfli::approx {

enum class SchemeFamily { Child, Parent, Fair };

struct RoundingScheme {
  SchemeFamily family = SchemeFamily::Child;
  double epsilon = 0.0;           // clamp: probabilities in [eps, 1-eps]
  int max_attempts = 1000;
  std::uint64_t seed = 0;
};

enum class RoundingStatus { Feasible, Failed };

struct RoundingOutcome {
  RoundingStatus status = RoundingStatus::Failed;
  int attempts = 0;
  std::vector<int> y;                 // per interdependence (feasible only)
  double objective = 0.0;             // meaningful when feasible
  std::vector<double> flows;          // original-arc flows (feasible only)
  std::optional<double> relative_error;  // set when a reference was supplied
};

// Saturation probability for one interdependence under a scheme, from the
// relaxation's flows: child flow over child capacity (Child), parent flow
// over parent capacity (Parent), or one half (Fair), clamped to
// [epsilon, 1-epsilon]. Throws on an infinite ratio capacity.
double probability(const Instance& inst, const std::vector<double>& lp_flows,
                   const RoundingScheme& scheme, int interdep_index);

// The linear relaxation of a binary instance: same network, couplings turned
// into linear constraints with slope u_child/u_parent and intercept 0.
Instance relax(const Instance& inst);

// Fix a partial binary assignment (entries 0, 1, or -1 for unfixed) and
// produce the remaining linear problem: a saturated parent is substituted
// out (arc removed, capacity pushed into the endpoint supplies, its cost
// contribution accumulated), a disabled child is removed, and unfixed
// couplings keep their linear relaxation. Arc ids are re-numbered; arc_map
// maps new ids (1-based positions) back to original arc ids, and fixed_flows
// holds the implied flow of every removed original arc.
struct FixedProblem {
  Instance lp;
  double cost_const = 0.0;
  std::vector<int> arc_map;          // new arc index -> original arc id
  std::vector<double> fixed_flows;   // by original arc index; -1 = not fixed
};
FixedProblem fix_assignment(const Instance& inst, const std::vector<int>& y);

// Randomized rounding: solve the relaxation once, derive per-coupling
// probabilities, then draw assignments until one yields a feasible pure-flow
// problem (solved by the simplex module) or attempts run out. Deterministic
// given the scheme's seed. `reference_objective` fills relative_error.
RoundingOutcome round(const Instance& inst, const RoundingScheme& scheme,
                      std::optional<double> reference_objective = {});

// Exact branch-and-bound over the coupling binaries (best-first; node bounds
// from the partially fixed relaxation; branch on the unfixed coupling whose
// parent saturation is closest to one half).
struct BnBNode {
  std::vector<int> fixed;  // -1 unfixed, else 0/1
  double bound = 0.0;
  int depth = 0;
};
struct BnBResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<int> y;
  double objective = 0.0;
  std::vector<double> flows;  // original-arc flows when optimal
  long nodes_explored = 0;
};
struct BnBOptions {
  // Stop at the first feasible assignment instead of proving optimality.
  bool first_feasible_only = false;
};
BnBResult solve_bidm(const Instance& inst, const BnBOptions& options = {});

// |approx - reference| / |reference|; throws on a zero reference.
double relative_error(double approx_obj, double reference_obj);

}  // namespace mcnfli::approx

#endif  // MCNFLI_APPROX_HPP_
