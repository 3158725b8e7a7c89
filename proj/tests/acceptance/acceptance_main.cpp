// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero when any check fails. The checks
// cover: the hand-verified reference trace (through the CLI), agreement with
// the independent dense oracle, basis-rank equivalences, exactness of the
// branch-and-bound against brute force, the bounding sandwich, guaranteed
// rounding failure, linear growth of the binary/linear gap, the benchmark
// harness invariants, solver scaling, and the uncoupled special case.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "json.hpp"
#include "mcnfli/approx.hpp"
#include "mcnfli/basis.hpp"
#include "mcnfli/generator.hpp"
#include "mcnfli/harness.hpp"
#include "mcnfli/instance.hpp"
#include "mcnfli/linalg.hpp"
#include "mcnfli/oracle.hpp"
#include "mcnfli/rng.hpp"
#include "mcnfli/simplex.hpp"
#include "mcnfli/types.hpp"

using json = nlohmann::json;
using mcnfli::Instance;
using mcnfli::SolveStatus;
using mcnfli::VariableRef;
namespace approx = mcnfli::approx;
namespace gen = mcnfli::generator;
namespace oracle = mcnfli::oracle;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Relative agreement with an absolute floor of the same size.
bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// ---------------------------------------------------------------------------
// CLI subprocess support (check 1 drives the shipped binary, not the library).

struct CliRun {
  int exit_code = -1;
  std::string out;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

CliRun run_cli(const std::vector<std::string>& args) {
  std::string cmd = shell_quote(MCNFLI_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  CliRun result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.out.append(buf.data(), got);
  const int rc = pclose(pipe);
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::vector<json> parse_jsonl(const std::string& text) {
  std::vector<json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(json::parse(line));
  }
  return lines;
}

bool vec_equals(const json& arr, const std::vector<double>& want,
                double tol = 1e-9) {
  if (!arr.is_array() || arr.size() != want.size()) return false;
  for (size_t i = 0; i < want.size(); ++i)
    if (!close(arr[i].get<double>(), want[i], tol)) return false;
  return true;
}

bool matrix_equals(const json& rows, const std::vector<std::vector<double>>& want,
                   double tol = 1e-9) {
  if (!rows.is_array() || rows.size() != want.size()) return false;
  for (size_t r = 0; r < want.size(); ++r) {
    if (!vec_equals(rows[r], want[r], tol)) return false;
  }
  return true;
}

bool names_equal(const json& arr, const std::vector<std::string>& want) {
  if (!arr.is_array() || arr.size() != want.size()) return false;
  for (size_t i = 0; i < want.size(); ++i)
    if (arr[i].get<std::string>() != want[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Shared instance families.

// Small linear instances with unit/double slopes and small integer
// intercepts: every capacity is 256, so the capacity-ratio relaxation is
// exactly 1 and loosening to alpha in {1,2}, beta in {0,1,2} keeps the
// instance feasible while keeping all pivot arithmetic in small rationals.
Instance linear_family_instance(int index, std::uint64_t* seed_out = nullptr) {
  gen::GenSpec spec;
  spec.nodes = 8 + 4 * (index % 4);  // 8..20 nodes
  spec.arcs_per_node = 3;            // up to 60 arcs
  spec.cap_min = 256;
  spec.cap_max = 256;
  spec.supply_per_256 = 2560.0;  // total supply 10*m <= 200 < 256
  const int p_target = 1 + (index % 5);
  spec.interdep_frac =
      static_cast<double>(p_target) / (3.0 * spec.nodes);
  spec.seed = 1000 + static_cast<std::uint64_t>(index);
  if (seed_out != nullptr) *seed_out = spec.seed;
  return gen::generate(spec).instance;
}

Instance jittered_relaxation(const Instance& binary, int index) {
  Instance lp = approx::relax(binary);
  mcnfli::rng::Stream stream(777, static_cast<std::uint64_t>(index));
  for (auto& dep : lp.interdeps) {
    dep.alpha = static_cast<double>(stream.next_int(1, 2));
    dep.beta = static_cast<double>(stream.next_int(0, 2));
  }
  lp.validate_or_throw();
  return lp;
}

// Binary instances with at most 6 couplings for the exactness check.
Instance binary_family_instance(int index) {
  static const int kNodes[3] = {10, 12, 16};
  gen::GenSpec spec;
  spec.nodes = kNodes[index % 3];
  spec.arcs_per_node = 3;
  const int p_target = 1 + (index % 6);
  spec.interdep_frac =
      static_cast<double>(p_target) / (3.0 * spec.nodes);
  spec.seed = 3000 + static_cast<std::uint64_t>(index);
  return gen::generate(spec).instance;
}

// Three-node bottleneck family: the relaxation rides the coupling for free,
// but the binary model must pay the M-cost bypass (the saturated-parent
// branch overloads the middle node, the shut-child branch needs the bypass).
Instance gap_instance(double m_cost) {
  Instance inst;
  inst.kind = mcnfli::ModelKind::Binary;
  inst.add_node(2.0);
  inst.add_node(0.0);
  inst.add_node(-2.0);
  inst.add_arc(1, 2, 3.0, 0.0);      // parent
  inst.add_arc(2, 3, 1.0, 0.0);      // middle bottleneck
  inst.add_arc(1, 3, 6.0, 0.0);      // child
  inst.add_arc(1, 3, 2.0, m_cost);   // bypass
  inst.add_interdependence(1, 3, 1.0, 0.0);
  return inst;
}

// Variant where the saturated-parent branch is feasible at constant cost but
// shutting the child forces the M-cost bypass.
Instance rounding_gap_instance(double m_cost) {
  Instance inst;
  inst.kind = mcnfli::ModelKind::Binary;
  inst.add_node(2.0);
  inst.add_node(0.0);
  inst.add_node(-2.0);
  inst.add_arc(1, 2, 1.0, 1.0);      // parent
  inst.add_arc(2, 3, 1.0, 1.0);      // middle lane
  inst.add_arc(1, 3, 2.0, 1.0);      // child
  inst.add_arc(1, 3, 2.0, m_cost);   // bypass
  inst.add_interdependence(1, 3, 1.0, 0.0);
  return inst;
}

// ---------------------------------------------------------------------------
// Check 1: the hand-worked reference run, through the CLI.

Outcome criterion1() {
  const std::string fixture = testutil::fixture_path("golden_11node.dimacs");
  const std::string basis = testutil::fixture_path("golden_11node_basis.json");

  const CliRun solve = run_cli({"solve", "--input", fixture});
  if (solve.exit_code != 0) return {false, "solve exited nonzero"};
  const json sj = json::parse(solve.out);
  if (sj["status"] != "optimal") return {false, "solve status not optimal"};
  if (!close(sj["objective"].get<double>(), 189.25, 1e-9))
    return {false, "cold objective " + solve.out.substr(0, 60)};

  const CliRun trace =
      run_cli({"trace", "--input", fixture, "--basis", basis});
  if (trace.exit_code != 0) return {false, "trace exited nonzero"};
  const std::vector<json> lines = parse_jsonl(trace.out);
  if (lines.size() != 4) return {false, "expected 3 iterations + result"};

  const json& it1 = lines[0];
  if (!vec_equals(it1["net"]["tree"], {10, -6, 0, -4}))
    return {false, "iteration-1 tree requirements"};
  if (!vec_equals(it1["net"]["interdep"], {1, 2, 0.5, 7.5}))
    return {false, "iteration-1 coupling requirements"};
  if (!vec_equals(it1["potentials"]["node"],
                  {13, -2, -2.5, 5, -2.5, -3, 2, 0, -4, -3.5, -2}))
    return {false, "iteration-1 node potentials"};
  if (!vec_equals(it1["potentials"]["interdep"], {0, 0, -10, 0}))
    return {false, "iteration-1 coupling potentials"};
  if (!names_equal(it1["d_cols"],
                   {"a12", "a8", "a1", "a15", "s0", "s1", "s3"}))
    return {false, "iteration-1 certificate columns"};
  if (!matrix_equals(it1["d"], {{1, 0, 1, 0, 0, 0, 0},
                                {0, 1, -1, -1, 0, 0, 0},
                                {0, -1, 0, 1, 0, 0, 0},
                                {-0.5, 0, 0, 0, 1, 0, 0},
                                {0, 0, 0, 0, 0, 1, 0},
                                {0, -1, 1, 0, 0, 0, 0},
                                {0, 0, 0, 1, 0, 0, 1}}))
    return {false, "iteration-1 certificate matrix"};
  if (!names_equal(it1["dhat_cols"], {"a8", "a1", "a12", "a15"}))
    return {false, "iteration-1 reduced columns"};
  if (it1["pivot"]["entering"] != "a3" ||
      !close(it1["pivot"]["theta"].get<double>(), 5.5, 1e-9) ||
      it1["pivot"]["blocking"] != "a8")
    return {false, "first pivot"};
  if (!close(it1["objective"].get<double>(), 210.5, 1e-9))
    return {false, "iteration-1 objective"};

  const json& it2 = lines[1];
  if (!names_equal(it2["d_cols"], {"a12", "a1", "a15", "s0", "s1", "s3"}))
    return {false, "iteration-2 certificate columns"};
  if (!matrix_equals(it2["d"], {{1, 1, 1, 0, 0, 0},
                                {0, -1, -1, 0, 0, 0},
                                {-0.5, 0, 0, 1, 0, 0},
                                {0, 0, 0, 0, 1, 0},
                                {0, 1, 0, 0, 0, 0},
                                {0, 0, 1, 0, 0, 1}}))
    return {false, "iteration-2 certificate matrix"};
  if (it2["pivot"]["entering"] != "a23" ||
      !close(it2["pivot"]["theta"].get<double>(), 1.0, 1e-9) ||
      it2["pivot"]["blocking"] != "a22")
    return {false, "second pivot"};
  if (!close(it2["objective"].get<double>(), 191.25, 1e-9))
    return {false, "iteration-2 objective"};

  const json& it3 = lines[2];
  if (!it3["pivot"].is_null()) return {false, "expected optimal iteration 3"};
  if (!close(it3["objective"].get<double>(), 189.25, 1e-9))
    return {false, "final objective"};

  const json& tail = lines[3]["result"];
  if (tail["status"] != "optimal" ||
      !close(tail["objective"].get<double>(), 189.25, 1e-9))
    return {false, "result record"};
  return {true, "cold solve and 3-iteration trace reproduce the reference"};
}

// ---------------------------------------------------------------------------
// Check 2: 200 linear instances vs the dense oracle, and path equality of
// the full and reduced certificate modes under smallest-index pricing.

Outcome criterion2() {
  // "Path" = the sequence of bases visited. Each step is fully determined
  // by the discrete pivot data below, so comparing them exactly compares the
  // basis walk bit-for-bit; final values are canonical in both modes and
  // must match exactly too.
  struct PathPoint {
    int phase = 0;
    VariableRef entering;
    int direction = 0;
    VariableRef blocking;
    mcnfli::VarLocation blocking_bound = mcnfli::VarLocation::Lower;
    bool bound_flip = false;
    bool final_record = false;
    bool operator==(const PathPoint&) const = default;
  };
  for (int i = 0; i < 200; ++i) {
    const Instance binary = linear_family_instance(i);
    const Instance lp = jittered_relaxation(binary, i);

    auto run = [&lp](bool use_dhat) {
      std::vector<PathPoint> path;
      mcnfli::SolveOptions opt;
      opt.rule = mcnfli::PricingRule::Bland;
      opt.use_dhat = use_dhat;
      opt.trace = [&path](const mcnfli::TraceRecord& tr) {
        PathPoint pt;
        pt.phase = tr.phase;
        if (tr.pivot) {
          pt.entering = tr.pivot->entering;
          pt.direction = tr.pivot->direction;
          pt.blocking = tr.pivot->blocking;
          pt.blocking_bound = tr.pivot->blocking_bound;
          pt.bound_flip = tr.pivot->bound_flip;
        } else {
          pt.final_record = true;
        }
        path.push_back(pt);
      };
      const mcnfli::SolveResult res = mcnfli::solve(lp, opt);
      return std::make_pair(res, path);
    };
    const auto [res_d, path_d] = run(false);
    const auto [res_r, path_r] = run(true);

    if (res_d.status != SolveStatus::Optimal)
      return {false, "instance " + std::to_string(i) + " not optimal"};
    if (res_r.status != res_d.status ||
        path_d.size() != path_r.size())
      return {false, "path length mismatch at instance " + std::to_string(i)};
    for (size_t k = 0; k < path_d.size(); ++k) {
      if (!(path_d[k] == path_r[k]))
        return {false, "pivot path diverges at instance " +
                           std::to_string(i) + " step " + std::to_string(k)};
    }
    if (res_d.iterations != res_r.iterations ||
        res_d.phase1_iterations != res_r.phase1_iterations ||
        res_d.objective != res_r.objective ||
        res_d.flows != res_r.flows || res_d.slacks != res_r.slacks)
      return {false, "final values differ at instance " + std::to_string(i)};

    const mcnfli::SolveResult dense = oracle::solve_dense(oracle::assemble(lp));
    if (dense.status != SolveStatus::Optimal)
      return {false, "oracle not optimal at instance " + std::to_string(i)};
    if (!rel_close(res_d.objective, dense.objective, 1e-6))
      return {false, "objective " + fmt(res_d.objective) + " vs oracle " +
                         fmt(dense.objective) + " at instance " +
                         std::to_string(i)};
  }
  return {true, "200 instances agree with the oracle; certificate paths "
                "identical"};
}

// ---------------------------------------------------------------------------
// Check 3: rank equivalence over sampled candidate bases.

Outcome criterion3() {
  long total = 0, good = 0, bad = 0;
  for (int inst_idx = 0; inst_idx < 12; ++inst_idx) {
    gen::GenSpec spec;
    spec.nodes = 6 + 2 * (inst_idx % 3);  // 6..10 nodes
    spec.arcs_per_node = 3;
    const int p_target = 1 + (inst_idx % 3);
    spec.interdep_frac =
        static_cast<double>(p_target) / (3.0 * spec.nodes);
    spec.seed = 2000 + static_cast<std::uint64_t>(inst_idx);
    const Instance inst = gen::generate(spec).instance;
    const int m = inst.num_nodes();
    const int n = inst.num_arcs();
    const int p = inst.num_interdeps();
    const int basis_size = m + p - 1;

    mcnfli::rng::Stream stream(4242, static_cast<std::uint64_t>(inst_idx));
    for (int cand = 0; cand < 90; ++cand) {
      // Draw a random candidate set of m+p-1 variables.
      std::vector<VariableRef> pool;
      for (int a = 1; a <= n; ++a) pool.push_back(VariableRef::flow(a));
      for (int t = 0; t < p; ++t) pool.push_back(VariableRef::slack(t));
      for (size_t k = pool.size(); k > 1; --k) {
        const size_t j = static_cast<size_t>(
            stream.next_int(0, static_cast<long>(k) - 1));
        std::swap(pool[k - 1], pool[j]);
      }
      pool.resize(static_cast<size_t>(basis_size));

      std::vector<int> basic_arcs, basic_slacks, upper_arcs;
      std::vector<char> in_basis(static_cast<size_t>(n) + 1, 0);
      for (const auto& v : pool) {
        if (v.is_flow()) {
          basic_arcs.push_back(v.index);
          in_basis[static_cast<size_t>(v.index)] = 1;
        } else {
          basic_slacks.push_back(v.index);
        }
      }
      for (int a = 1; a <= n; ++a)
        if (!in_basis[static_cast<size_t>(a)] &&
            stream.next_uniform01() < 0.25)
          upper_arcs.push_back(a);

      const bool dense_ok = oracle::dense_basis_nonsingular(inst, pool);
      bool cert_full_ok = false, cert_reduced_ok = false;
      try {
        const mcnfli::BasisState basis =
            mcnfli::make_basis(inst, basic_arcs, basic_slacks, upper_arcs);
        const mcnfli::CertMatrix cert = mcnfli::build_cert(inst, basis);
        cert_full_ok = mcnfli::matrix_rank(cert.d) == cert.r;
        cert_reduced_ok =
            mcnfli::matrix_rank(cert.dhat) == cert.dhat.rows();
      } catch (const mcnfli::SolveError&) {
        // Cyclic independent part: the candidate is structurally singular,
        // certificate checks count as failed.
      }
      ++total;
      if (dense_ok != cert_full_ok || dense_ok != cert_reduced_ok)
        return {false, "rank disagreement (instance " +
                           std::to_string(inst_idx) + ", candidate " +
                           std::to_string(cand) + ")"};
      if (dense_ok)
        ++good;
      else
        ++bad;
    }
  }
  if (total < 1000) return {false, "sampled only " + std::to_string(total)};
  if (good == 0 || bad == 0)
    return {false, "degenerate sample: good=" + std::to_string(good) +
                       " bad=" + std::to_string(bad)};
  return {true, std::to_string(total) + " candidates, " +
                    std::to_string(good) + " bases / " + std::to_string(bad) +
                    " non-bases, all three rank tests agree"};
}

// ---------------------------------------------------------------------------
// Check 4: branch-and-bound equals brute force exactly.

Outcome criterion4() {
  for (int i = 0; i < 100; ++i) {
    const Instance inst = binary_family_instance(i);
    const auto bb = approx::solve_bidm(inst);
    const auto bf = oracle::brute_force_bidm(inst);
    if (bb.status != bf.status)
      return {false, "status mismatch at instance " + std::to_string(i)};
    if (bb.status != SolveStatus::Optimal) continue;
    if (bb.objective != bf.objective)
      return {false, "objective " + fmt(bb.objective) + " vs " +
                         fmt(bf.objective) + " at instance " +
                         std::to_string(i)};
  }
  return {true, "100 instances solved identically to exhaustive search"};
}

// ---------------------------------------------------------------------------
// Check 5: relaxation <= exact binary optimum <= every feasible rounding.

Outcome criterion5() {
  int checked = 0, rounded_checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Instance inst = (i % 2 == 0) ? linear_family_instance(i / 2)
                                       : binary_family_instance(i / 2);
    const auto bb = approx::solve_bidm(inst);
    if (bb.status != SolveStatus::Optimal) continue;
    const auto lp = mcnfli::solve(approx::relax(inst));
    if (lp.status != SolveStatus::Optimal)
      return {false, "relaxation unsolved at trial " + std::to_string(i)};
    if (lp.objective > bb.objective + 1e-6 * std::max(1.0, std::abs(bb.objective)))
      return {false, "relaxation above exact optimum at trial " +
                         std::to_string(i)};
    ++checked;
    for (const auto& labeled : mcnfli::harness::default_schemes()) {
      approx::RoundingScheme scheme = labeled.scheme;
      scheme.seed = 9000 + static_cast<std::uint64_t>(i);
      const auto out = approx::round(inst, scheme, bb.objective);
      if (out.status != approx::RoundingStatus::Feasible) continue;
      if (bb.objective >
          out.objective + 1e-6 * std::max(1.0, std::abs(out.objective)))
        return {false, "rounding below exact optimum (" + labeled.label +
                           ", trial " + std::to_string(i) + ")"};
      ++rounded_checked;
    }
  }
  if (checked < 50 || rounded_checked < 100)
    return {false, "insufficient coverage: " + std::to_string(checked) +
                       " trials, " + std::to_string(rounded_checked) +
                       " roundings"};
  return {true, std::to_string(checked) + " trials / " +
                    std::to_string(rounded_checked) +
                    " feasible roundings respect the sandwich"};
}

// ---------------------------------------------------------------------------
// Check 6: guaranteed rounding failure at exact probabilities.

Outcome criterion6() {
  const Instance inst = testutil::failure_fixture();
  int clamped_feasible = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto family :
         {approx::SchemeFamily::Child, approx::SchemeFamily::Parent}) {
      approx::RoundingScheme scheme{family, 0.0, 1000, seed};
      const auto out = approx::round(inst, scheme);
      if (out.status != approx::RoundingStatus::Failed ||
          out.attempts != 1000)
        return {false, "exact scheme unexpectedly feasible at seed " +
                           std::to_string(seed)};
    }
    approx::RoundingScheme clamped{approx::SchemeFamily::Child, 0.01, 1000,
                                   seed};
    if (approx::round(inst, clamped).status ==
        approx::RoundingStatus::Feasible)
      ++clamped_feasible;
  }
  if (clamped_feasible < 19)
    return {false, "clamped scheme feasible only " +
                       std::to_string(clamped_feasible) + "/20"};
  return {true, "20/20 guaranteed failures; clamped scheme feasible " +
                    std::to_string(clamped_feasible) + "/20"};
}

// ---------------------------------------------------------------------------
// Check 7: the binary/linear gap and the shut-child penalty grow linearly.

Outcome criterion7() {
  const std::array<double, 3> kM = {10.0, 100.0, 1000.0};

  std::array<double, 3> lidm{}, gap{};
  for (size_t k = 0; k < kM.size(); ++k) {
    const Instance inst = gap_instance(kM[k]);
    const auto lp = mcnfli::solve(approx::relax(inst));
    const auto bb = approx::solve_bidm(inst);
    if (lp.status != SolveStatus::Optimal ||
        bb.status != SolveStatus::Optimal)
      return {false, "gap family unsolved at M=" + fmt(kM[k])};
    lidm[k] = lp.objective;
    gap[k] = bb.objective - lp.objective;
  }
  if (!close(lidm[1], lidm[0], 1e-9) || !close(lidm[2], lidm[0], 1e-9))
    return {false, "relaxation objective drifts with M"};
  const double r1 = (gap[2] - gap[1]) / (gap[1] - gap[0]);
  if (!close(r1, 10.0, 1e-6))
    return {false, "exact-gap growth ratio " + fmt(r1) + " (want 10)"};

  std::array<double, 3> rlidm{}, rgap{};
  for (size_t k = 0; k < kM.size(); ++k) {
    const Instance inst = rounding_gap_instance(kM[k]);
    const auto lp = mcnfli::solve(approx::relax(inst));
    const auto bb = approx::solve_bidm(inst);
    if (lp.status != SolveStatus::Optimal ||
        bb.status != SolveStatus::Optimal)
      return {false, "rounding family unsolved at M=" + fmt(kM[k])};
    if (!close(bb.objective, 3.0, 1e-9))
      return {false, "exact optimum not constant in rounding family"};
    const auto shut = approx::fix_assignment(inst, {0});
    const auto sub = mcnfli::solve(shut.lp);
    if (sub.status != SolveStatus::Optimal)
      return {false, "shut-child branch unsolved at M=" + fmt(kM[k])};
    rlidm[k] = lp.objective;
    rgap[k] = (sub.objective + shut.cost_const) - lp.objective;
  }
  if (!close(rlidm[1], rlidm[0], 1e-9) || !close(rlidm[2], rlidm[0], 1e-9))
    return {false, "rounding-family relaxation drifts with M"};
  const double r2 = (rgap[2] - rgap[1]) / (rgap[1] - rgap[0]);
  if (!close(r2, 10.0, 1e-6))
    return {false, "shut-child growth ratio " + fmt(r2) + " (want 10)"};

  return {true, "exact gap " + fmt(gap[0]) + "/" + fmt(gap[1]) + "/" +
                    fmt(gap[2]) + ", shut-child gap " + fmt(rgap[0]) + "/" +
                    fmt(rgap[1]) + "/" + fmt(rgap[2]) +
                    ", both linear; relaxation constant"};
}

// ---------------------------------------------------------------------------
// Check 8: the benchmark harness on the standard grid.

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        if (w < v[i]) ++less;
        if (w == v[i]) ++equal;
      }
      r[i] = less + (equal + 1) / 2.0;
    }
    return r;
  };
  const std::vector<double> rx = ranks(xs), ry = ranks(ys);
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, dx = 0, dy = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0 || dy == 0) return 0.0;
  return num / std::sqrt(dx * dy);
}

Outcome criterion8() {
  mcnfli::harness::HarnessConfig config;
  config.trials = 30;
  config.master_seed = 20260822;
  const std::vector<double> fracs = {0.02, 0.05, 0.10};
  for (double frac : fracs) {
    mcnfli::harness::GroupSpec group;
    std::ostringstream name;
    name << "unstructured-" << frac;
    group.name = name.str();
    group.gen.nodes = 64;
    group.gen.arcs_per_node = 4;
    group.gen.mode = gen::InterdepMode::Unstructured;
    group.gen.interdep_frac = frac;
    config.groups.push_back(group);
  }

  const auto result = mcnfli::harness::run_trials(config);
  if (result.summaries.size() != 3) return {false, "missing summaries"};

  std::vector<double> means;
  for (const auto& summary : result.summaries) {
    if (summary.trials_ok == 0)
      return {false, summary.name + ": no successful trials"};
    if (summary.lp_mean_error >= 0.05)
      return {false, summary.name + ": relaxation error " +
                         fmt(summary.lp_mean_error) + " >= 5%"};
    means.push_back(summary.lp_mean_error);

    const mcnfli::harness::SchemeSummary* fair = nullptr;
    const mcnfli::harness::SchemeSummary* child0 = nullptr;
    const mcnfli::harness::SchemeSummary* child1 = nullptr;
    for (const auto& scheme : summary.schemes) {
      if (scheme.label == "fair") fair = &scheme;
      if (scheme.label == "child-0.00") child0 = &scheme;
      if (scheme.label == "child-0.01") child1 = &scheme;
    }
    if (fair == nullptr || child0 == nullptr || child1 == nullptr)
      return {false, summary.name + ": scheme summaries missing"};
    if (!(fair->mean_error > child0->mean_error))
      return {false, summary.name + ": fair error " + fmt(fair->mean_error) +
                         " not above informed child " +
                         fmt(child0->mean_error)};
    if (!(fair->failure_rate >= child1->failure_rate))
      return {false, summary.name + ": fair failure rate " +
                         fmt(fair->failure_rate) + " below clamped child " +
                         fmt(child1->failure_rate)};
  }
  const double rho = spearman(fracs, means);
  if (rho < 0.0)
    return {false, "error trend decreasing (spearman " + fmt(rho) + ")"};
  return {true, "errors " + fmt(means[0]) + "/" + fmt(means[1]) + "/" +
                    fmt(means[2]) + ", spearman " + fmt(rho) +
                    ", scheme orderings hold in all groups"};
}

// ---------------------------------------------------------------------------
// Check 9: per-iteration cost scales sub-quadratically with instance size.

Outcome criterion9() {
  auto measure = [](int nodes, std::uint64_t seed, double* solve_seconds) {
    gen::GenSpec spec;
    spec.nodes = nodes;
    spec.arcs_per_node = 4;
    spec.interdep_frac = 4.0 / (4.0 * nodes);  // exactly 4 couplings
    spec.seed = seed;
    const Instance lp = approx::relax(gen::generate(spec).instance);
    const auto t0 = std::chrono::steady_clock::now();
    const mcnfli::SolveResult res = mcnfli::solve(lp);
    const double secs = seconds_since(t0);
    if (solve_seconds != nullptr) *solve_seconds = secs;
    if (res.status != SolveStatus::Optimal) return -1.0;
    const long iters = res.iterations + res.phase1_iterations;
    return secs / static_cast<double>(std::max(1L, iters));
  };

  double small_sum = 0, big_sum = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const double s = measure(128, seed, nullptr);
    double big_secs = 0.0;
    const double b = measure(512, seed, &big_secs);
    if (s < 0 || b < 0) return {false, "scaling instance unsolved"};
    if (big_secs >= 5.0)
      return {false, "512-node solve took " + fmt(big_secs) + "s"};
    small_sum += s;
    big_sum += b;
  }
  const double factor = big_sum / small_sum;
  if (factor > 8.0)
    return {false, "per-iteration time factor " + fmt(factor) + " > 8"};
  return {true, "per-iteration factor " + fmt(factor) +
                    " for 4x nodes/arcs; every 512-node solve under 5s"};
}

// ---------------------------------------------------------------------------
// Check 10: with no couplings the generalized solver matches the oracle.

Outcome criterion10() {
  for (int i = 0; i < 40; ++i) {
    gen::GenSpec spec;
    spec.nodes = 6 + 4 * (i % 4);
    spec.arcs_per_node = 3;
    spec.interdep_frac = 1.0 / (3.0 * spec.nodes);
    spec.seed = 4000 + static_cast<std::uint64_t>(i);
    Instance inst = gen::generate(spec).instance;
    inst.interdeps.clear();  // drop the couplings entirely
    inst.kind = mcnfli::ModelKind::Linear;
    inst.validate_or_throw();

    const auto mine = mcnfli::solve(inst);
    const auto dense = oracle::solve_dense(oracle::assemble(inst));
    if (mine.status != dense.status)
      return {false, "status mismatch at instance " + std::to_string(i)};
    if (mine.status != SolveStatus::Optimal) continue;
    if (!close(mine.objective, dense.objective, 1e-9))
      return {false, "objective " + fmt(mine.objective) + " vs oracle " +
                         fmt(dense.objective) + " at instance " +
                         std::to_string(i)};
  }
  return {true, "40 uncoupled instances match the oracle to 1e-9"};
}

}  // namespace

int main() {
  struct Entry {
    int number;
    std::function<Outcome()> fn;
    double budget_seconds;  // 0 = no pinned budget
  };
  const std::vector<Entry> entries = {
      {1, criterion1, 1.0},   {2, criterion2, 60.0},
      {3, criterion3, 30.0},  {4, criterion4, 60.0},
      {5, criterion5, 0.0},   {6, criterion6, 0.0},
      {7, criterion7, 0.0},   {8, criterion8, 600.0},
      {9, criterion9, 0.0},   {10, criterion10, 0.0},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    if (outcome.pass && entry.budget_seconds > 0 &&
        elapsed > entry.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [over budget " + fmt(entry.budget_seconds) + "s]";
    }
    std::ostringstream line;
    line << "CRITERION " << entry.number << ": "
         << (outcome.pass ? "PASS" : "FAIL") << " (" << outcome.detail << "; "
         << fmt(elapsed) << "s)";
    std::cout << line.str() << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
