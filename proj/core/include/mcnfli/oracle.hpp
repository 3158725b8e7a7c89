// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Independent correctness oracles. Everything in this module deliberately
// avoids the main solver's code paths: it carries its own dense Gaussian
// elimination and a textbook bounded-variable simplex so that agreement
// between the two stacks is meaningful evidence.

#ifndef MCNFLI_ORACLE_HPP_
#define MCNFLI_ORACLE_HPP_

#include <vector>

#include "mcnfli/basis.hpp"
#include "mcnfli/instance.hpp"
#include "mcnfli/simplex.hpp"

namespace mcnfli::oracle {

// The full block system of the linear model:
//   rows 0..m-1     node conservation (incidence matrix)
//   rows m..m+p-1   couplings: -alpha at the parent column, +1 at the child
//                   column, +1 at the slack column
//   cols 0..n-1     arc flows, bounded by capacity
//   cols n..n+p-1   coupling slacks, bounded below by 0 only
struct DenseLP {
  int rows = 0;
  int cols = 0;
  int num_flows = 0;  // leading columns that are arc flows (rest are slacks)
  std::vector<std::vector<double>> a;
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<double> upper;
};

DenseLP assemble(const Instance& inst);

// Rank of an arbitrary dense matrix (independent elimination code).
int dense_rank(const std::vector<std::vector<double>>& mat, double tol = kTol);

// Whether a candidate basic set (m+p-1 variables) of the block system has
// full column rank, i.e. really is a basis. Flow variables are addressed by
// arc id, slacks by interdependence index.
bool dense_basis_nonsingular(const Instance& inst,
                             const std::vector<VariableRef>& vars);

// Bounded-variable primal simplex with the smallest-index rule, two phases.
// Returns flows in the first n slots and slacks in the rest of x.
SolveResult solve_dense(const DenseLP& lp);

// Exhaustive exact solve of the binary model: enumerate every assignment of
// the coupling binaries, solve each fixed pure-flow problem densely, return
// the best. Guarded to p <= 20.
struct BruteForceResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<int> y;          // size p (empty when infeasible)
  double objective = 0.0;
  std::vector<double> flows;   // size n, including fixed arcs
};
BruteForceResult brute_force_bidm(const Instance& inst);

}  // namespace mcnfli::oracle

#endif  // MCNFLI_ORACLE_HPP_
