// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Basis bookkeeping for the generalized network simplex. A basis of the
// linear model with m nodes, n arcs, and p interdependencies has m+p-1 basic
// variables (arc flows and/or coupling slacks). The basic arcs that touch no
// interdependence form a spanning forest whose tree count equals r-p+1, where
// r is the number of basic interdependent variables (coupled arcs plus
// slacks). Whether a candidate basis is actually nonsingular is decided by a
// small r×r certificate matrix built from how basic coupled arcs straddle the
// forest's trees.

#ifndef MCNFLI_BASIS_HPP_
#define MCNFLI_BASIS_HPP_

#include <compare>
#include <vector>

#include "mcnfli/instance.hpp"
#include "mcnfli/linalg.hpp"

namespace mcnfli {

// A structural variable: either the flow on an arc (addressed by arc id) or
// the slack of an interdependence (addressed by 0-based interdependence
// index).
struct VariableRef {
  enum class Kind { Flow, Slack };
  Kind kind = Kind::Flow;
  int index = 0;  // arc id (1-based) for Flow, interdependence index
                  // (0-based) for Slack

  static VariableRef flow(int arc_id) {
    return VariableRef{Kind::Flow, arc_id};
  }
  static VariableRef slack(int interdep_index) {
    return VariableRef{Kind::Slack, interdep_index};
  }
  bool is_flow() const { return kind == Kind::Flow; }

  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

// Total order on variables: arcs by id first, then slacks by index. Used for
// deterministic tie-breaking (smallest-index pivots and the fallback pricing
// rule).
int variable_ordinal(const VariableRef& v, int num_arcs);

// Spanning forest of the basic independent arcs, rooted per tree at the
// smallest contained node id. Trees are numbered by their root's node id in
// ascending order.
struct Forest {
  std::vector<int> tree_of;     // node idx (id-1) -> tree number (0-based)
  std::vector<int> parent;      // node idx -> parent node id, 0 at roots
  std::vector<int> parent_arc;  // node idx -> arc id of the edge toward the
                                // parent (orientation may be either way), 0
                                // at roots
  std::vector<int> depth;       // node idx -> depth (root = 0)
  std::vector<int> roots;       // tree number -> root node id
  int tree_count = 0;
};

// Where each variable currently sits.
enum class VarLocation : char { Lower, Upper, Basic };

struct BasisState {
  std::vector<VariableRef> basic;    // the basic set, unordered storage
  std::vector<VarLocation> arc_loc;  // by arc index (id-1)
  std::vector<VarLocation> slack_loc;  // by interdependence index
  Forest forest;                     // forest of basic independent arcs
  int r = 0;                         // number of basic coupled variables

  VarLocation location(const VariableRef& v) const {
    return v.is_flow() ? arc_loc[v.index - 1] : slack_loc[v.index];
  }
};

// Incidence sign of arc `arc_id` against tree `tree`: +1 when the arc leaves
// the tree (tail inside, head outside), -1 when it enters, 0 otherwise.
int delta(const Instance& inst, const Forest& forest, int arc_id, int tree);

// Rebuild the forest (and r) from the basic set. Throws SolveError if the
// basic independent arcs contain a cycle or the counts are inconsistent with
// a plausible basis.
void rebuild_forest(const Instance& inst, BasisState& basis);

// Certificate matrices for a candidate basis.
//
// Full matrix `d` (r×r): one row per tree except the last one in root order
// (which is redundant and dropped), then one row per interdependence; one
// column per basic coupled arc ordered by (interdependence index, parent
// before child), then one column per basic slack by interdependence index.
// Tree rows hold incidence signs of the column's arc; an interdependence row
// holds -alpha under its basic parent, +1 under its basic child, +1 under its
// own basic slack.
//
// Reduced matrix `dhat`: drop every basic-slack column and the row of every
// interdependence whose slack is basic ("loose" couplings); columns are the
// tight arcs first, then the loose arcs, each group in the full matrix's
// relative order. The two matrices are singular (or not) together, which
// is cross-checked in debug builds.
struct CertMatrix {
  Matrix d;                            // r × r
  std::vector<VariableRef> col_vars;   // size r
  std::vector<int> row_tree;           // first r-p entries: tree number
  std::vector<int> row_interdep;       // last p entries: interdependence idx

  Matrix dhat;
  std::vector<VariableRef> dhat_cols;  // tight arcs then loose arcs
  std::vector<int> dhat_row_tree;      // leading rows: tree number
  std::vector<int> dhat_row_interdep;  // trailing rows: tight interdep idx
  std::vector<char> col_is_tight;      // parallel to dhat_cols

  int r = 0;
  int p = 0;
  int tree_count = 0;
};

CertMatrix build_cert(const Instance& inst, const BasisState& basis);

// True when the certificate matrix is nonsingular at the global tolerance —
// i.e. the candidate basis really is a basis. A 0×0 matrix counts as
// nonsingular.
bool is_good(const CertMatrix& cert);

}  // namespace mcnfli

#endif  // MCNFLI_BASIS_HPP_
