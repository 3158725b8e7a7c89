// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/oracle.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "mcnfli/approx.hpp"
#include "mcnfli/basis.hpp"
#include "mcnfli/generator.hpp"
#include "mcnfli/rng.hpp"
#include "mcnfli/simplex.hpp"

using mcnfli::Instance;
using mcnfli::SolveStatus;
using mcnfli::VariableRef;

TEST_CASE("assemble lays out the block system") {
  Instance inst;
  inst.add_node(7.0);
  inst.add_node(-4.0);
  inst.add_node(-3.0);
  inst.add_arc(1, 2, 4.0, 1.0);
  inst.add_arc(1, 3, 10.0, 1.0);
  inst.add_arc(2, 3, 10.0, 10.0);
  inst.add_interdependence(1, 2, 0.5, 0.25);

  const auto lp = mcnfli::oracle::assemble(inst);
  CHECK(lp.rows == 4);
  CHECK(lp.cols == 4);
  CHECK(lp.num_flows == 3);
  // Node rows: +1 leaving, -1 entering.
  CHECK(lp.a[0][0] == 1.0);
  CHECK(lp.a[1][0] == -1.0);
  CHECK(lp.a[2][1] == -1.0);
  // Coupling row: -alpha under parent, +1 under child, +1 under slack.
  CHECK(lp.a[3][0] == -0.5);
  CHECK(lp.a[3][1] == 1.0);
  CHECK(lp.a[3][3] == 1.0);
  CHECK(lp.rhs[3] == 0.25);
  CHECK(lp.cost[3] == 0.0);
  CHECK(lp.upper[1] == 10.0);
}

TEST_CASE("dense simplex solves small knowns") {
  Instance diamond;
  diamond.add_node(4.0);
  diamond.add_node(0.0);
  diamond.add_node(-4.0);
  diamond.add_arc(1, 2, 3.0, 1.0);
  diamond.add_arc(2, 3, 3.0, 1.0);
  diamond.add_arc(1, 3, 10.0, 5.0);
  const auto res = mcnfli::oracle::solve_dense(mcnfli::oracle::assemble(diamond));
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(11.0));

  Instance tight;
  tight.add_node(5.0);
  tight.add_node(-5.0);
  tight.add_arc(1, 2, 3.0, 1.0);
  CHECK(mcnfli::oracle::solve_dense(mcnfli::oracle::assemble(tight)).status ==
        SolveStatus::Infeasible);
}

TEST_CASE("dense simplex agrees on the reference instance") {
  const Instance inst = testutil::golden_instance();
  const auto res = mcnfli::oracle::solve_dense(mcnfli::oracle::assemble(inst));
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(189.25).epsilon(1e-12));
}

TEST_CASE("dense_rank on hand matrices") {
  CHECK(mcnfli::oracle::dense_rank({{1, 0}, {0, 1}}) == 2);
  CHECK(mcnfli::oracle::dense_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(mcnfli::oracle::dense_rank({{0, 0}, {0, 0}}) == 0);
  CHECK(mcnfli::oracle::dense_rank({{1, 2, 3}, {4, 5, 6}}) == 2);
  CHECK(mcnfli::oracle::dense_rank({}) == 0);
}

TEST_CASE("dense basis check matches the certificate check") {
  const Instance inst = testutil::golden_instance();

  auto vars_of = [](const mcnfli::BasisState& b) { return b.basic; };

  // The reference basis is a basis.
  const auto good = testutil::golden_basis(inst);
  CHECK(mcnfli::oracle::dense_basis_nonsingular(inst, vars_of(good)));
  CHECK(mcnfli::is_good(mcnfli::build_cert(inst, good)));

  // A candidate whose coupled arcs miss tree {8,9} is not.
  const auto bad = mcnfli::make_basis(
      inst, {1, 2, 7, 8, 9, 15, 18, 20, 21, 22}, {0, 1, 2, 3}, {6, 14});
  CHECK(!mcnfli::oracle::dense_basis_nonsingular(inst, vars_of(bad)));
  CHECK(!mcnfli::is_good(mcnfli::build_cert(inst, bad)));
}

TEST_CASE("brute force picks the saturated-parent branch when forced") {
  // Flow conservation pins the parent at its capacity and needs the child
  // open, so y = 1 is the only feasible assignment.
  Instance inst;
  inst.kind = mcnfli::ModelKind::Binary;
  inst.add_node(7.0);
  inst.add_node(-4.0);
  inst.add_node(-3.0);
  inst.add_arc(1, 2, 4.0, 1.0);
  inst.add_arc(1, 3, 10.0, 1.0);
  inst.add_arc(2, 3, 10.0, 10.0);
  inst.add_interdependence(1, 2, 0.5, 0.0);
  const auto bf = mcnfli::oracle::brute_force_bidm(inst);
  CHECK(bf.status == SolveStatus::Optimal);
  REQUIRE(bf.y.size() == 1);
  CHECK(bf.y[0] == 1);
  CHECK(bf.objective == doctest::Approx(7.0));  // x = (4, 3, 0)

  const auto bb = mcnfli::approx::solve_bidm(inst);
  CHECK(bb.status == SolveStatus::Optimal);
  CHECK(bb.objective == doctest::Approx(bf.objective));
}

TEST_CASE("brute force closes the child when saturating is expensive") {
  // Saturating the parent (capacity 10) is impossible here, so y = 0: the
  // child stays shut and everything routes over the detour.
  Instance inst;
  inst.kind = mcnfli::ModelKind::Binary;
  inst.add_node(5.0);
  inst.add_node(0.0);
  inst.add_node(-5.0);
  inst.add_arc(1, 2, 10.0, 1.0);
  inst.add_arc(1, 3, 10.0, 1.0);
  inst.add_arc(2, 3, 10.0, 3.0);
  inst.add_interdependence(1, 2, 0.5, 0.0);
  const auto bf = mcnfli::oracle::brute_force_bidm(inst);
  CHECK(bf.status == SolveStatus::Optimal);
  REQUIRE(bf.y.size() == 1);
  CHECK(bf.y[0] == 0);
  CHECK(bf.objective == doctest::Approx(20.0));  // x = (5, 0, 5)

  const auto bb = mcnfli::approx::solve_bidm(inst);
  CHECK(bb.status == SolveStatus::Optimal);
  CHECK(bb.objective == doctest::Approx(20.0));
  // The relaxation is cheaper: child capped at (u_child/u_parent) * parent,
  // i.e. x2 <= x1 here, optimal at x = (2.5, 2.5, 2.5).
  const auto lp = mcnfli::solve(mcnfli::approx::relax(inst));
  CHECK(lp.status == SolveStatus::Optimal);
  CHECK(lp.objective == doctest::Approx(12.5));
}

TEST_CASE("brute force matches branch and bound on generated instances") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    mcnfli::generator::GenSpec spec;
    spec.nodes = 10;
    spec.arcs_per_node = 3;
    spec.interdep_frac = 0.1;  // 3 couplings on 30 arcs
    spec.seed = seed;
    const Instance inst = mcnfli::generator::generate(spec).instance;
    REQUIRE(inst.kind == mcnfli::ModelKind::Binary);

    const auto bf = mcnfli::oracle::brute_force_bidm(inst);
    const auto bb = mcnfli::approx::solve_bidm(inst);
    CHECK(bf.status == bb.status);
    if (bf.status == SolveStatus::Optimal) {
      CHECK(bf.objective == doctest::Approx(bb.objective).epsilon(1e-9));
      CHECK(bf.y == bb.y);
    }
  }
}
