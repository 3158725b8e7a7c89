// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mcnfli/approx.hpp"
#include "mcnfli/rng.hpp"
#include "mcnfli/simplex.hpp"
#include "mcnfli/types.hpp"

namespace mcnfli::generator {
namespace {

// Substream labels. Top-level draws derive one sub-seed per network attempt
// and one per coupling attempt, so a resample never disturbs sibling draws.
constexpr std::uint64_t kSubNetSeed = 101;
constexpr std::uint64_t kSubDepSeed = 102;

constexpr std::uint64_t kSubRoles = 1;
constexpr std::uint64_t kSubSupply = 2;
constexpr std::uint64_t kSubDemand = 3;
constexpr std::uint64_t kSubSkeleton = 4;
constexpr std::uint64_t kSubSkeletonCap = 5;
constexpr std::uint64_t kSubArcEndpoints = 6;
constexpr std::uint64_t kSubArcCost = 7;
constexpr std::uint64_t kSubArcCap = 8;
constexpr std::uint64_t kSubPick = 1;

void check_spec(const GenSpec& spec) {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };
  if (spec.nodes < 2) fail("generator: need at least 2 nodes");
  if (spec.arcs_per_node < 1) fail("generator: arcs_per_node must be >= 1");
  if (!(spec.source_frac > 0.0 && spec.source_frac < 1.0))
    fail("generator: source_frac must lie in (0, 1)");
  if (!(spec.sink_frac > 0.0 && spec.sink_frac < 1.0))
    fail("generator: sink_frac must lie in (0, 1)");
  if (spec.cost_min < 0 || spec.cost_max < spec.cost_min)
    fail("generator: bad cost range");
  if (spec.cap_min < 1 || spec.cap_max < spec.cap_min)
    fail("generator: bad capacity range");
  if (spec.supply_per_256 <= 0.0) fail("generator: supply scale must be > 0");
  if (!(spec.interdep_frac > 0.0 && spec.interdep_frac <= 1.0))
    fail("generator: interdep_frac must lie in (0, 1]");
  if (spec.max_interdep_resamples < 1 || spec.max_network_resamples < 1)
    fail("generator: resample budgets must be >= 1");
  const int m = spec.nodes;
  const int ns = std::max(1, static_cast<int>(std::lround(spec.source_frac * m)));
  const int nk = std::max(1, static_cast<int>(std::lround(spec.sink_frac * m)));
  if (ns + nk > m)
    fail("generator: source and sink fractions leave no room for both roles");
}

void shuffle_ids(std::vector<int>& ids, rng::Stream& stream) {
  for (int i = static_cast<int>(ids.size()) - 1; i > 0; --i) {
    const int j = static_cast<int>(stream.next_int(0, i));
    std::swap(ids[i], ids[static_cast<std::size_t>(j)]);
  }
}

// Split `total` into `parts` nonnegative integers summing exactly to it
// (uniform cut points, not uniform composition; good enough for benchmarks).
std::vector<long> split_total(long total, int parts, rng::Stream& stream) {
  std::vector<long> cuts;
  cuts.reserve(static_cast<std::size_t>(parts) + 1);
  cuts.push_back(0);
  for (int i = 0; i < parts - 1; ++i) cuts.push_back(stream.next_int(0, total));
  cuts.push_back(total);
  std::sort(cuts.begin(), cuts.end());
  std::vector<long> out(static_cast<std::size_t>(parts));
  for (int i = 0; i < parts; ++i)
    out[static_cast<std::size_t>(i)] = cuts[static_cast<std::size_t>(i) + 1] -
                                       cuts[static_cast<std::size_t>(i)];
  return out;
}

struct NetworkDraw {
  Instance instance;
  std::vector<int> sources;
  std::vector<int> sinks;  // node ids with negative supply assigned
};

NetworkDraw build_network(const GenSpec& spec, std::uint64_t net_seed) {
  const int m = spec.nodes;
  const int n_target = m * spec.arcs_per_node;
  const int ns = std::max(1, static_cast<int>(std::lround(spec.source_frac * m)));
  const int nk = std::max(1, static_cast<int>(std::lround(spec.sink_frac * m)));

  std::vector<int> ids(static_cast<std::size_t>(m));
  std::iota(ids.begin(), ids.end(), 1);
  rng::Stream role_stream(net_seed, kSubRoles);
  shuffle_ids(ids, role_stream);
  std::vector<int> sources(ids.begin(), ids.begin() + ns);
  std::vector<int> sinks(ids.begin() + ns, ids.begin() + ns + nk);

  const long total =
      std::max<long>(1, std::lround(spec.supply_per_256 * m / 256.0));
  rng::Stream supply_stream(net_seed, kSubSupply);
  rng::Stream demand_stream(net_seed, kSubDemand);
  const std::vector<long> give = split_total(total, ns, supply_stream);
  const std::vector<long> take = split_total(total, nk, demand_stream);

  std::vector<double> supply(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 0; i < ns; ++i)
    supply[static_cast<std::size_t>(sources[static_cast<std::size_t>(i)])] =
        static_cast<double>(give[static_cast<std::size_t>(i)]);
  for (int i = 0; i < nk; ++i)
    supply[static_cast<std::size_t>(sinks[static_cast<std::size_t>(i)])] =
        -static_cast<double>(take[static_cast<std::size_t>(i)]);

  NetworkDraw draw;
  Instance& inst = draw.instance;
  for (int v = 1; v <= m; ++v) inst.add_node(supply[static_cast<std::size_t>(v)]);

  // Spanning skeleton by random attachment: every node links to a uniformly
  // random earlier node, the edge is oriented along the net flow its subtree
  // must exchange with the rest, and its capacity covers that flow. Routing
  // all supply down the skeleton is then always possible, at maximum cost.
  rng::Stream skel_stream(net_seed, kSubSkeleton);
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 1);
  shuffle_ids(order, skel_stream);
  std::vector<int> anchor(static_cast<std::size_t>(m), 0);  // by position
  for (int i = 1; i < m; ++i)
    anchor[static_cast<std::size_t>(i)] =
        static_cast<int>(skel_stream.next_int(0, i - 1));

  std::vector<double> subtree(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    subtree[static_cast<std::size_t>(i)] =
        supply[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  for (int i = m - 1; i >= 1; --i)
    subtree[static_cast<std::size_t>(anchor[static_cast<std::size_t>(i)])] +=
        subtree[static_cast<std::size_t>(i)];

  rng::Stream skel_cap_stream(net_seed, kSubSkeletonCap);
  for (int i = 1; i < m; ++i) {
    const int v = order[static_cast<std::size_t>(i)];
    const int p =
        order[static_cast<std::size_t>(anchor[static_cast<std::size_t>(i)])];
    const double flow = subtree[static_cast<std::size_t>(i)];
    const double drawn =
        static_cast<double>(skel_cap_stream.next_int(spec.cap_min, spec.cap_max));
    const double cap = std::max(drawn, std::ceil(std::abs(flow)));
    if (flow >= 0.0) {
      inst.add_arc(v, p, cap, static_cast<double>(spec.cost_max));
    } else {
      inst.add_arc(p, v, cap, static_cast<double>(spec.cost_max));
    }
  }

  // Remaining arcs: uniform endpoints (parallel arcs allowed, self-loops
  // rejected), uniform integer costs and capacities.
  rng::Stream end_stream(net_seed, kSubArcEndpoints);
  rng::Stream cost_stream(net_seed, kSubArcCost);
  rng::Stream cap_stream(net_seed, kSubArcCap);
  for (int k = m - 1; k < n_target; ++k) {
    int tail = static_cast<int>(end_stream.next_int(1, m));
    int head = static_cast<int>(end_stream.next_int(1, m));
    while (head == tail) head = static_cast<int>(end_stream.next_int(1, m));
    const double cost =
        static_cast<double>(cost_stream.next_int(spec.cost_min, spec.cost_max));
    const double cap =
        static_cast<double>(cap_stream.next_int(spec.cap_min, spec.cap_max));
    inst.add_arc(tail, head, cap, cost);
  }

  draw.sources = std::move(sources);
  draw.sinks = std::move(sinks);
  return draw;
}

// One coupling draw on top of a fixed network. Returns nothing when the draw
// cannot be completed (e.g. no eligible child arcs remain), which counts as a
// resample.
std::optional<Instance> draw_interdeps(const GenSpec& spec,
                                       const NetworkDraw& net,
                                       std::uint64_t dep_seed) {
  const int n = static_cast<int>(net.instance.arcs.size());
  rng::Stream pick(dep_seed, kSubPick);

  if (spec.mode == InterdepMode::Unstructured) {
    const int k = std::max(
        1, static_cast<int>(std::lround(spec.interdep_frac * n)));
    if (2 * k > n)
      throw ValidationError(
          "generator: interdep_frac needs two distinct arcs per coupling");
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 1);
    // Partial Fisher-Yates: only the first 2k slots are needed.
    for (int i = 0; i < 2 * k; ++i) {
      const int j = static_cast<int>(pick.next_int(i, n - 1));
      std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    Instance inst = net.instance;
    for (int t = 0; t < k; ++t) {
      const int parent = ids[static_cast<std::size_t>(2 * t)];
      const int child = ids[static_cast<std::size_t>(2 * t + 1)];
      const double up = inst.arc(parent).capacity;
      const double uc = inst.arc(child).capacity;
      inst.add_interdependence(parent, child, uc / up, 0.0);
    }
    inst.kind = ModelKind::Binary;
    return inst;
  }

  // Structured: a fraction of the demand nodes become saturable parent arcs;
  // each pairs with a random plain arc of the original network as its child.
  std::vector<int> eligible;
  for (int node_id : net.sinks) {
    if (net.instance.node(node_id).supply < -kTol) eligible.push_back(node_id);
  }
  if (eligible.empty()) return std::nullopt;
  int want = std::max(
      1, static_cast<int>(std::lround(spec.interdep_frac *
                                       static_cast<double>(net.sinks.size()))));
  want = std::min<int>(want, static_cast<int>(eligible.size()));
  shuffle_ids(eligible, pick);
  std::vector<int> selected(eligible.begin(), eligible.begin() + want);
  std::sort(selected.begin(), selected.end());

  StructuredTransformResult st = structured_transform(net.instance, selected);
  Instance inst = std::move(st.instance);
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  for (int parent : st.parent_arc_ids) {
    int child = 0;
    bool found = false;
    for (int attempt = 0; attempt < 50 * n; ++attempt) {
      child = static_cast<int>(pick.next_int(1, n));
      if (!used[static_cast<std::size_t>(child)]) {
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
    used[static_cast<std::size_t>(child)] = 1;
    const double up = inst.arc(parent).capacity;
    const double uc = inst.arc(child).capacity;
    inst.add_interdependence(parent, child, uc / up, 0.0);
  }
  inst.kind = ModelKind::Binary;
  return inst;
}

bool feasible_probe(const Instance& inst) {
  try {
    approx::BnBOptions probe;
    probe.first_feasible_only = true;
    return approx::solve_bidm(inst, probe).status == SolveStatus::Optimal;
  } catch (const SolveError&) {
    return false;
  }
}

}  // namespace

GenResult generate(const GenSpec& spec) {
  check_spec(spec);
  GenResult result;
  result.provenance.spec = spec;
  for (int net_try = 0; net_try < spec.max_network_resamples; ++net_try) {
    const std::uint64_t net_seed =
        rng::keyed(spec.seed, static_cast<std::uint64_t>(net_try), kSubNetSeed);
    const NetworkDraw net = build_network(spec, net_seed);
    for (int dep_try = 0; dep_try < spec.max_interdep_resamples; ++dep_try) {
      const std::uint64_t dep_seed = rng::keyed(
          net_seed, static_cast<std::uint64_t>(dep_try), kSubDepSeed);
      std::optional<Instance> inst = draw_interdeps(spec, net, dep_seed);
      if (!inst) {
        ++result.provenance.interdep_resamples;
        continue;
      }
      inst->validate_or_throw();
      if (spec.ensure_feasible && !feasible_probe(*inst)) {
        ++result.provenance.interdep_resamples;
        continue;
      }
      result.instance = std::move(*inst);
      return result;
    }
    ++result.provenance.network_resamples;
  }
  std::ostringstream oss;
  oss << "generator: no feasible instance within "
      << spec.max_network_resamples << " network x "
      << spec.max_interdep_resamples << " coupling resamples (seed "
      << spec.seed << ")";
  throw SolveError(oss.str());
}

std::string provenance_json(const GenProvenance& prov) {
  nlohmann::json j;
  const GenSpec& s = prov.spec;
  j["spec"] = {
      {"nodes", s.nodes},
      {"arcs_per_node", s.arcs_per_node},
      {"source_frac", s.source_frac},
      {"sink_frac", s.sink_frac},
      {"cost_range", {s.cost_min, s.cost_max}},
      {"capacity_range", {s.cap_min, s.cap_max}},
      {"supply_per_256", s.supply_per_256},
      {"interdep_mode",
       s.mode == InterdepMode::Unstructured ? "unstructured" : "structured"},
      {"interdep_frac", s.interdep_frac},
      {"seed", s.seed},
      {"ensure_feasible", s.ensure_feasible},
  };
  j["interdep_resamples"] = prov.interdep_resamples;
  j["network_resamples"] = prov.network_resamples;
  j["skeleton_note"] = prov.skeleton_note;
  return j.dump(2);
}

}  // namespace mcnfli::generator
