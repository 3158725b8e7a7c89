// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Problem model: a minimum-cost network flow instance extended with linear
// interdependencies between arc pairs. Two interpretations of an
// interdependence record are supported:
//
//   * Linear (continuous):  x_child ≤ alpha * x_parent + beta
//   * Binary (on/off):      x_child ≤ u_child * y,  y = 1 only if the parent
//                           arc is saturated (x_parent = u_parent)
//
// The binary interpretation requires finite capacities on both arcs of every
// pair and ignores (alpha, beta).

#ifndef MCNFLI_INSTANCE_HPP_
#define MCNFLI_INSTANCE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcnfli/types.hpp"

namespace mcnfli {

struct NodeRecord {
  int id = 0;          // 1-based, contiguous after construction
  double supply = 0.0; // positive = source, negative = sink
};

struct ArcRecord {
  int id = 0;          // 1-based, contiguous after construction
  int tail = 0;        // node id
  int head = 0;        // node id
  double capacity = kInf;
  double cost = 0.0;
};

// One parent/child coupling between two distinct arcs.
struct Interdependence {
  int parent = 0;      // arc id
  int child = 0;       // arc id
  double alpha = 0.0;  // slope of the linear coupling
  double beta = 0.0;   // intercept of the linear coupling
};

enum class ModelKind { Linear, Binary };

// Role of an arc with respect to the interdependence list.
enum class ArcRole { Independent, Parent, Child };

class Instance {
 public:
  ModelKind kind = ModelKind::Linear;
  std::vector<NodeRecord> nodes;
  std::vector<ArcRecord> arcs;
  std::vector<Interdependence> interdeps;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_arcs() const { return static_cast<int>(arcs.size()); }
  int num_interdeps() const { return static_cast<int>(interdeps.size()); }

  // Construction helpers that keep ids contiguous. They return the new id.
  int add_node(double supply);
  int add_arc(int tail, int head, double capacity, double cost);
  void add_interdependence(int parent_arc, int child_arc, double alpha,
                           double beta);

  // Dense index accessors. Valid only when ids are contiguous (which
  // validate() checks and the construction helpers maintain): node id k lives
  // at nodes[k-1], arc id k at arcs[k-1].
  const NodeRecord& node(int id) const { return nodes[id - 1]; }
  const ArcRecord& arc(int id) const { return arcs[id - 1]; }
  NodeRecord& node(int id) { return nodes[id - 1]; }
  ArcRecord& arc(int id) { return arcs[id - 1]; }

  // Role of an arc in the interdependence list, with the interdependence
  // index (0-based) it belongs to. Rebuilt on demand; callers on hot paths
  // should use build_roles() once and keep the result.
  struct RoleTable {
    std::vector<ArcRole> role;       // by arc index (id-1)
    std::vector<int> interdep_index; // by arc index; -1 for independent arcs
  };
  RoleTable build_roles() const;

  // Full structural validation. Returns a list of human-readable violations;
  // empty means the instance is well formed. Checks:
  //  * node/arc ids unique and contiguous from 1
  //  * arc endpoints exist and are distinct (no self-loops)
  //  * capacities nonnegative (infinite allowed only when kind permits),
  //    costs finite
  //  * supplies balance to zero (within tolerance)
  //  * interdependence arc ids exist, parent != child, and no arc appears in
  //    more than one interdependence (in any role)
  //  * linear kind: alpha >= 0 and the coupling admits x = 0
  //    (alpha*0 + beta >= 0, i.e. beta >= 0)
  //  * binary kind: both arcs of each pair have finite capacity
  std::vector<std::string> validate() const;

  // validate() and throw ValidationError on the first violation.
  void validate_or_throw() const;
};

// Combine several disjoint instances into one, re-indexing nodes and arcs,
// then add bridge arcs between them. A bridge endpoint is addressed as
// (instance index, node id in that instance).
struct BridgeArc {
  int from_instance = 0;
  int from_node = 0;
  int to_instance = 0;
  int to_node = 0;
  double capacity = kInf;
  double cost = 0.0;
};
Instance merge_networks(const std::vector<Instance>& parts,
                        const std::vector<BridgeArc>& bridges);

// Rewrite selected demand nodes so that meeting each one's demand becomes a
// saturable parent arc:
//
//  * each selected demand node d (supply < 0) becomes a transshipment node,
//    with a fresh node d' holding the original demand and a parent arc
//    (d, d') of capacity |b_d| and cost 0;
//  * a single relief hub node is added (when at least one node is selected)
//    with a zero-cost arc (s, hub) of capacity b_s from every supply node and
//    a penalty arc (hub, d') of capacity |b_d| for every selected node, so
//    the transformed instance stays feasible even when a parent arc cannot be
//    saturated. The penalty cost defaults to ten times the maximum arc cost.
//
// Returns the transformed instance plus, per selected node in input order,
// the id of its parent arc.
struct StructuredTransformResult {
  Instance instance;
  std::vector<int> parent_arc_ids;
  int hub_node_id = 0;  // 0 when no node was selected
};
StructuredTransformResult structured_transform(
    const Instance& input, const std::vector<int>& demand_nodes,
    std::optional<double> penalty_cost = std::nullopt);

}  // namespace mcnfli

#endif  // MCNFLI_INSTANCE_HPP_
