// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mcnfli {

namespace {

std::string fmt_violation(const std::string& what) { return what; }

}  // namespace

int Instance::add_node(double supply) {
  const int id = static_cast<int>(nodes.size()) + 1;
  nodes.push_back(NodeRecord{id, supply});
  return id;
}

int Instance::add_arc(int tail, int head, double capacity, double cost) {
  const int id = static_cast<int>(arcs.size()) + 1;
  arcs.push_back(ArcRecord{id, tail, head, capacity, cost});
  return id;
}

void Instance::add_interdependence(int parent_arc, int child_arc, double alpha,
                                   double beta) {
  interdeps.push_back(Interdependence{parent_arc, child_arc, alpha, beta});
}

Instance::RoleTable Instance::build_roles() const {
  RoleTable table;
  table.role.assign(arcs.size(), ArcRole::Independent);
  table.interdep_index.assign(arcs.size(), -1);
  for (int t = 0; t < num_interdeps(); ++t) {
    const Interdependence& dep = interdeps[t];
    if (dep.parent >= 1 && dep.parent <= num_arcs()) {
      table.role[dep.parent - 1] = ArcRole::Parent;
      table.interdep_index[dep.parent - 1] = t;
    }
    if (dep.child >= 1 && dep.child <= num_arcs()) {
      table.role[dep.child - 1] = ArcRole::Child;
      table.interdep_index[dep.child - 1] = t;
    }
  }
  return table;
}

std::vector<std::string> Instance::validate() const {
  std::vector<std::string> out;
  std::ostringstream os;

  const int m = num_nodes();
  const int n = num_arcs();

  // Node ids: unique and contiguous from 1.
  {
    std::set<int> seen;
    for (const NodeRecord& nd : nodes) {
      if (!seen.insert(nd.id).second) {
        os.str("");
        os << "duplicate node id " << nd.id;
        out.push_back(fmt_violation(os.str()));
      }
    }
    for (int i = 0; i < m; ++i) {
      if (nodes[i].id != i + 1) {
        os.str("");
        os << "node ids not contiguous: position " << i << " holds id "
           << nodes[i].id;
        out.push_back(fmt_violation(os.str()));
        break;
      }
    }
    for (const NodeRecord& nd : nodes) {
      if (!std::isfinite(nd.supply)) {
        os.str("");
        os << "node " << nd.id << " has non-finite supply";
        out.push_back(fmt_violation(os.str()));
      }
    }
  }

  // Arc ids, endpoints, capacities, costs.
  {
    std::set<int> seen;
    for (const ArcRecord& a : arcs) {
      if (!seen.insert(a.id).second) {
        os.str("");
        os << "duplicate arc id " << a.id;
        out.push_back(fmt_violation(os.str()));
      }
    }
    for (int j = 0; j < n; ++j) {
      if (arcs[j].id != j + 1) {
        os.str("");
        os << "arc ids not contiguous: position " << j << " holds id "
           << arcs[j].id;
        out.push_back(fmt_violation(os.str()));
        break;
      }
    }
    for (const ArcRecord& a : arcs) {
      if (a.tail < 1 || a.tail > m || a.head < 1 || a.head > m) {
        os.str("");
        os << "arc " << a.id << " references missing node";
        out.push_back(fmt_violation(os.str()));
        continue;
      }
      if (a.tail == a.head) {
        os.str("");
        os << "arc " << a.id << " is a self-loop on node " << a.tail;
        out.push_back(fmt_violation(os.str()));
      }
      if (std::isnan(a.capacity) || a.capacity < 0.0) {
        os.str("");
        os << "arc " << a.id << " has invalid capacity";
        out.push_back(fmt_violation(os.str()));
      }
      if (!std::isfinite(a.cost)) {
        os.str("");
        os << "arc " << a.id << " has non-finite cost";
        out.push_back(fmt_violation(os.str()));
      }
    }
  }

  // Supply balance.
  {
    double total = 0.0;
    for (const NodeRecord& nd : nodes) total += nd.supply;
    if (std::abs(total) > kTol * std::max(1.0, static_cast<double>(m))) {
      os.str("");
      os << "supplies do not balance: total " << total;
      out.push_back(fmt_violation(os.str()));
    }
  }

  // Interdependencies.
  {
    std::set<int> used_arcs;
    for (int t = 0; t < num_interdeps(); ++t) {
      const Interdependence& dep = interdeps[t];
      const bool parent_ok = dep.parent >= 1 && dep.parent <= n;
      const bool child_ok = dep.child >= 1 && dep.child <= n;
      if (!parent_ok || !child_ok) {
        os.str("");
        os << "interdependence " << (t + 1) << " references missing arc";
        out.push_back(fmt_violation(os.str()));
        continue;
      }
      if (dep.parent == dep.child) {
        os.str("");
        os << "interdependence " << (t + 1)
           << " couples an arc with itself (arc " << dep.parent << ")";
        out.push_back(fmt_violation(os.str()));
      }
      for (int arc_id : {dep.parent, dep.child}) {
        if (!used_arcs.insert(arc_id).second) {
          os.str("");
          os << "arc " << arc_id
             << " appears in more than one interdependence";
          out.push_back(fmt_violation(os.str()));
        }
      }
      if (kind == ModelKind::Linear) {
        if (!(dep.alpha >= 0.0) || !std::isfinite(dep.alpha)) {
          os.str("");
          os << "interdependence " << (t + 1)
             << " has invalid slope " << dep.alpha;
          out.push_back(fmt_violation(os.str()));
        }
        // The zero flow must satisfy the coupling so that phase-1 starts
        // feasible: alpha*0 + beta >= 0.
        if (!(dep.beta >= 0.0) || !std::isfinite(dep.beta)) {
          os.str("");
          os << "interdependence " << (t + 1)
             << " has intercept " << dep.beta
             << " which excludes the zero flow";
          out.push_back(fmt_violation(os.str()));
        }
      } else {
        if (!std::isfinite(arcs[dep.parent - 1].capacity)) {
          os.str("");
          os << "interdependence " << (t + 1)
             << " parent arc " << dep.parent
             << " needs a finite capacity in the binary model";
          out.push_back(fmt_violation(os.str()));
        }
        if (!std::isfinite(arcs[dep.child - 1].capacity)) {
          os.str("");
          os << "interdependence " << (t + 1)
             << " child arc " << dep.child
             << " needs a finite capacity in the binary model";
          out.push_back(fmt_violation(os.str()));
        }
      }
    }
  }

  return out;
}

void Instance::validate_or_throw() const {
  std::vector<std::string> violations = validate();
  if (!violations.empty()) {
    throw ValidationError(violations.front());
  }
}

Instance merge_networks(const std::vector<Instance>& parts,
                        const std::vector<BridgeArc>& bridges) {
  Instance merged;
  if (!parts.empty()) merged.kind = parts.front().kind;

  // node_base[k] = id offset applied to nodes of part k.
  std::vector<int> node_base(parts.size() + 1, 0);
  std::vector<int> arc_base(parts.size() + 1, 0);
  for (size_t k = 0; k < parts.size(); ++k) {
    node_base[k + 1] = node_base[k] + parts[k].num_nodes();
    arc_base[k + 1] = arc_base[k] + parts[k].num_arcs();
  }

  for (size_t k = 0; k < parts.size(); ++k) {
    const Instance& part = parts[k];
    for (const NodeRecord& nd : part.nodes) {
      merged.add_node(nd.supply);
    }
  }
  for (size_t k = 0; k < parts.size(); ++k) {
    const Instance& part = parts[k];
    for (const ArcRecord& a : part.arcs) {
      merged.add_arc(a.tail + node_base[k], a.head + node_base[k], a.capacity,
                     a.cost);
    }
  }
  for (size_t k = 0; k < parts.size(); ++k) {
    const Instance& part = parts[k];
    for (const Interdependence& dep : part.interdeps) {
      merged.add_interdependence(dep.parent + arc_base[k],
                                 dep.child + arc_base[k], dep.alpha, dep.beta);
    }
  }

  for (const BridgeArc& b : bridges) {
    const bool from_ok = b.from_instance >= 0 &&
                         b.from_instance < static_cast<int>(parts.size());
    const bool to_ok =
        b.to_instance >= 0 && b.to_instance < static_cast<int>(parts.size());
    if (!from_ok || !to_ok) {
      throw ValidationError("bridge references a missing instance index");
    }
    if (b.from_node < 1 ||
        b.from_node > parts[b.from_instance].num_nodes() || b.to_node < 1 ||
        b.to_node > parts[b.to_instance].num_nodes()) {
      throw ValidationError("bridge references a missing node");
    }
    merged.add_arc(b.from_node + node_base[b.from_instance],
                   b.to_node + node_base[b.to_instance], b.capacity, b.cost);
  }

  return merged;
}

StructuredTransformResult structured_transform(
    const Instance& input, const std::vector<int>& demand_nodes,
    std::optional<double> penalty_cost) {
  StructuredTransformResult result;
  result.instance = input;
  Instance& inst = result.instance;

  for (int node_id : demand_nodes) {
    if (node_id < 1 || node_id > inst.num_nodes()) {
      throw ValidationError("structured transform: missing demand node");
    }
    if (!(inst.node(node_id).supply < 0.0)) {
      throw ValidationError(
          "structured transform: selected node is not a demand node");
    }
  }

  if (demand_nodes.empty()) {
    return result;
  }

  double max_cost = 0.0;
  for (const ArcRecord& a : input.arcs) {
    max_cost = std::max(max_cost, std::abs(a.cost));
  }
  const double penalty = penalty_cost.value_or(10.0 * std::max(1.0, max_cost));

  // Relief hub: lets every supply node push unused capacity toward demand
  // replicas that their parent arcs could not serve.
  const int hub = inst.add_node(0.0);
  result.hub_node_id = hub;
  for (int i = 1; i <= input.num_nodes(); ++i) {
    const double supply = input.node(i).supply;
    if (supply > 0.0) {
      inst.add_arc(i, hub, supply, 0.0);
    }
  }

  for (int node_id : demand_nodes) {
    const double demand = -inst.node(node_id).supply;  // demand > 0
    inst.node(node_id).supply = 0.0;
    const int replica = inst.add_node(-demand);
    const int parent_arc = inst.add_arc(node_id, replica, demand, 0.0);
    result.parent_arc_ids.push_back(parent_arc);
    inst.add_arc(hub, replica, demand, penalty);
  }

  return result;
}

}  // namespace mcnfli
