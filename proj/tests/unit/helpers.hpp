// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Shared fixtures for the unit tests.

#ifndef MCNFLI_TESTS_HELPERS_HPP_
#define MCNFLI_TESTS_HELPERS_HPP_

#include <string>

#include "mcnfli/dimacs.hpp"
#include "mcnfli/instance.hpp"
#include "mcnfli/simplex.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(MCNFLI_FIXTURE_DIR "/") + name;
}

// The 11-node coupled network whose solve is worked through by hand in the
// repository's golden trace test: 24 arcs of capacity 15, four couplings,
// optimal objective 189.25.
inline mcnfli::Instance golden_instance() {
  return mcnfli::parse_dimacs_file(fixture_path("golden_11node.dimacs"));
}

// Its starting basis: eleven basic arcs, three basic slacks, two arcs pinned
// at their upper bound.
inline mcnfli::BasisState golden_basis(const mcnfli::Instance& inst) {
  return mcnfli::make_basis(inst, {1, 2, 7, 8, 9, 12, 15, 18, 20, 21, 22},
                            {0, 1, 3}, {6, 14});
}

// A binary instance on which exact-probability rounding is guaranteed to
// fail: the relaxation saturates coupling 1's child (probability 1 under
// every ratio scheme, so y1 = 1 is always drawn), but pinning parent 1 at
// its capacity strands flow at node 3 when child 2 is shut and overloads
// node 4 when parent 2 is pinned — every drawable assignment is infeasible.
// With any positive probability clamp, y1 = 0 becomes drawable and both
// completions are feasible at objective 4 (all flow over the 1->4->5 lane).
//
//   supply +2 at node 1, -2 at node 5
//   a1  1->2  cap 1  cost 0   (parent of coupling 1)
//   a2  2->3  cap 1  cost 0   (child of coupling 1)
//   a3  3->5  cap 2  cost 0   (child of coupling 2)
//   a4  1->4  cap 2  cost 1   (parent of coupling 2)
//   a5  4->5  cap 2  cost 1
//
// Relaxation optimum (unique): x = (1, 1, 1, 1, 1), objective 2.
// Exact binary optimum: 4 (y = (0,0) or (0,1)).
inline mcnfli::Instance failure_fixture() {
  mcnfli::Instance inst;
  inst.kind = mcnfli::ModelKind::Binary;
  inst.add_node(2.0);
  inst.add_node(0.0);
  inst.add_node(0.0);
  inst.add_node(0.0);
  inst.add_node(-2.0);
  inst.add_arc(1, 2, 1.0, 0.0);
  inst.add_arc(2, 3, 1.0, 0.0);
  inst.add_arc(3, 5, 2.0, 0.0);
  inst.add_arc(1, 4, 2.0, 1.0);
  inst.add_arc(4, 5, 2.0, 1.0);
  inst.add_interdependence(1, 2, 1.0, 0.0);
  inst.add_interdependence(4, 3, 1.0, 0.0);
  return inst;
}

}  // namespace testutil

#endif  // MCNFLI_TESTS_HELPERS_HPP_
