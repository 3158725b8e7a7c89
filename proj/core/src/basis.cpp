// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/basis.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>

namespace mcnfli {

int variable_ordinal(const VariableRef& v, int num_arcs) {
  return v.is_flow() ? (v.index - 1) : (num_arcs + v.index);
}

int delta(const Instance& inst, const Forest& forest, int arc_id, int tree) {
  const ArcRecord& a = inst.arc(arc_id);
  const bool tail_in = forest.tree_of[a.tail - 1] == tree;
  const bool head_in = forest.tree_of[a.head - 1] == tree;
  if (tail_in && !head_in) return 1;
  if (!tail_in && head_in) return -1;
  return 0;
}

void rebuild_forest(const Instance& inst, BasisState& basis) {
  const int m = inst.num_nodes();
  const Instance::RoleTable roles = inst.build_roles();

  // Adjacency over basic independent arcs only.
  std::vector<std::vector<std::pair<int, int>>> adj(m);  // (other node, arc)
  int independent_count = 0;
  int coupled_count = 0;
  for (const VariableRef& v : basis.basic) {
    if (!v.is_flow()) {
      ++coupled_count;  // basic slack
      continue;
    }
    const ArcRecord& a = inst.arc(v.index);
    if (roles.role[v.index - 1] == ArcRole::Independent) {
      adj[a.tail - 1].push_back({a.head, a.id});
      adj[a.head - 1].push_back({a.tail, a.id});
      ++independent_count;
    } else {
      ++coupled_count;
    }
  }

  Forest& f = basis.forest;
  f.tree_of.assign(m, -1);
  f.parent.assign(m, 0);
  f.parent_arc.assign(m, 0);
  f.depth.assign(m, 0);
  f.roots.clear();
  f.tree_count = 0;

  // Scan nodes in ascending order so each tree is numbered by its smallest
  // node id, which is also its root.
  int visited_edges = 0;
  for (int start = 0; start < m; ++start) {
    if (f.tree_of[start] != -1) continue;
    const int tree = f.tree_count++;
    f.roots.push_back(start + 1);
    f.tree_of[start] = tree;
    std::queue<int> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (const auto& [other, arc_id] : adj[u]) {
        const int v = other - 1;
        if (f.tree_of[v] == -1) {
          f.tree_of[v] = tree;
          f.parent[v] = u + 1;
          f.parent_arc[v] = arc_id;
          f.depth[v] = f.depth[u] + 1;
          frontier.push(v);
          ++visited_edges;
        } else if (arc_id != f.parent_arc[v] && arc_id != f.parent_arc[u]) {
          throw SolveError("basis error: basic independent arcs form a cycle");
        }
      }
    }
  }

  if (visited_edges != independent_count) {
    throw SolveError("basis error: basic independent arcs form a cycle");
  }

  basis.r = coupled_count;
  // Sanity: |basic| = m+p-1 and tree_count = r-p+1.
  const int p = inst.num_interdeps();
  if (static_cast<int>(basis.basic.size()) != m + p - 1) {
    std::ostringstream os;
    os << "basis error: expected " << (m + p - 1) << " basic variables, got "
       << basis.basic.size();
    throw SolveError(os.str());
  }
  if (f.tree_count != basis.r - p + 1) {
    std::ostringstream os;
    os << "basis error: forest has " << f.tree_count << " trees, expected "
       << (basis.r - p + 1);
    throw SolveError(os.str());
  }
}

CertMatrix build_cert(const Instance& inst, const BasisState& basis) {
  const int p = inst.num_interdeps();
  const Instance::RoleTable roles = inst.build_roles();

  CertMatrix cert;
  cert.p = p;
  cert.r = basis.r;
  cert.tree_count = basis.forest.tree_count;

  // Column variables: coupled arcs by (interdependence, parent first), then
  // slacks by interdependence.
  std::vector<VariableRef> arc_cols;
  std::vector<VariableRef> slack_cols;
  for (int t = 0; t < p; ++t) {
    const Interdependence& dep = inst.interdeps[t];
    if (basis.arc_loc[dep.parent - 1] == VarLocation::Basic) {
      arc_cols.push_back(VariableRef::flow(dep.parent));
    }
    if (basis.arc_loc[dep.child - 1] == VarLocation::Basic) {
      arc_cols.push_back(VariableRef::flow(dep.child));
    }
  }
  for (int t = 0; t < p; ++t) {
    if (basis.slack_loc[t] == VarLocation::Basic) {
      slack_cols.push_back(VariableRef::slack(t));
    }
  }
  cert.col_vars = arc_cols;
  cert.col_vars.insert(cert.col_vars.end(), slack_cols.begin(),
                       slack_cols.end());
  if (static_cast<int>(cert.col_vars.size()) != cert.r) {
    throw SolveError("basis error: coupled-variable count mismatch");
  }

  const int num_tree_rows = cert.r - p;  // trees minus the dropped last one
  cert.row_tree.resize(num_tree_rows);
  for (int h = 0; h < num_tree_rows; ++h) cert.row_tree[h] = h;
  cert.row_interdep.resize(p);
  for (int t = 0; t < p; ++t) cert.row_interdep[t] = t;

  cert.d = Matrix(cert.r, cert.r, 0.0);
  for (int col = 0; col < cert.r; ++col) {
    const VariableRef& v = cert.col_vars[col];
    if (v.is_flow()) {
      for (int h = 0; h < num_tree_rows; ++h) {
        cert.d.at(h, col) =
            static_cast<double>(delta(inst, basis.forest, v.index, h));
      }
      const int t = roles.interdep_index[v.index - 1];
      const Interdependence& dep = inst.interdeps[t];
      cert.d.at(num_tree_rows + t, col) =
          (roles.role[v.index - 1] == ArcRole::Parent) ? -dep.alpha : 1.0;
    } else {
      cert.d.at(num_tree_rows + v.index, col) = 1.0;
    }
  }

  // Reduced matrix: drop slack columns and loose-interdependence rows, and
  // partition the arc columns into tight (slack nonbasic) and loose (slack
  // basic) groups.
  std::vector<char> loose(p, 0);
  for (int t = 0; t < p; ++t) {
    loose[t] = basis.slack_loc[t] == VarLocation::Basic ? 1 : 0;
  }
  std::vector<VariableRef> tight_arcs, loose_arcs;
  for (const VariableRef& v : arc_cols) {
    const int t = roles.interdep_index[v.index - 1];
    (loose[t] ? loose_arcs : tight_arcs).push_back(v);
  }
  cert.dhat_cols = tight_arcs;
  cert.dhat_cols.insert(cert.dhat_cols.end(), loose_arcs.begin(),
                        loose_arcs.end());
  cert.col_is_tight.assign(cert.dhat_cols.size(), 0);
  for (size_t i = 0; i < tight_arcs.size(); ++i) cert.col_is_tight[i] = 1;

  cert.dhat_row_tree = cert.row_tree;
  cert.dhat_row_interdep.clear();
  for (int t = 0; t < p; ++t) {
    if (!loose[t]) cert.dhat_row_interdep.push_back(t);
  }

  const int hat_n = static_cast<int>(cert.dhat_cols.size());
  const int hat_rows =
      num_tree_rows + static_cast<int>(cert.dhat_row_interdep.size());
  if (hat_rows != hat_n) {
    throw SolveError("basis error: reduced certificate is not square");
  }
  cert.dhat = Matrix(hat_n, hat_n, 0.0);
  for (int col = 0; col < hat_n; ++col) {
    const VariableRef& v = cert.dhat_cols[col];
    for (int h = 0; h < num_tree_rows; ++h) {
      cert.dhat.at(h, col) =
          static_cast<double>(delta(inst, basis.forest, v.index, h));
    }
    const int t = roles.interdep_index[v.index - 1];
    for (int rr = 0; rr < static_cast<int>(cert.dhat_row_interdep.size());
         ++rr) {
      if (cert.dhat_row_interdep[rr] == t) {
        const Interdependence& dep = inst.interdeps[t];
        cert.dhat.at(num_tree_rows + rr, col) =
            (roles.role[v.index - 1] == ArcRole::Parent) ? -dep.alpha : 1.0;
      }
    }
  }

  return cert;
}

bool is_good(const CertMatrix& cert) {
  const bool full_ok = matrix_rank(cert.d, kTol) == cert.r;
#ifndef NDEBUG
  const int hat_n = cert.dhat.rows();
  const bool hat_ok = matrix_rank(cert.dhat, kTol) == hat_n;
  assert(full_ok == hat_ok &&
         "full and reduced certificates must agree on singularity");
#endif
  return full_ok;
}

}  // namespace mcnfli
