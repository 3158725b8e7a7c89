// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Seeded random instance generator. The networks follow the classic
// transportation-benchmark recipe: a spanning skeleton routes all supply at
// maximum cost and guaranteed capacity, the remaining arcs are uniform
// random, and couplings are layered on top either by pairing random arcs
// (unstructured) or by turning selected demand nodes into saturable parent
// arcs (structured).

#ifndef MCNFLI_GENERATOR_HPP_
#define MCNFLI_GENERATOR_HPP_

#include <cstdint>
#include <string>

#include "mcnfli/instance.hpp"

namespace mcnfli::generator {

enum class InterdepMode { Unstructured, Structured };

struct GenSpec {
  int nodes = 64;
  int arcs_per_node = 4;
  double source_frac = 0.20;
  double sink_frac = 0.20;
  int cost_min = 1;
  int cost_max = 100;
  int cap_min = 100;
  int cap_max = 500;
  double supply_per_256 = 10000.0;  // total supply scales with nodes/256
  InterdepMode mode = InterdepMode::Unstructured;
  double interdep_frac = 0.05;  // of arcs (unstructured) or sinks (structured)
  std::uint64_t seed = 1;
  bool ensure_feasible = true;
  int max_interdep_resamples = 100;
  int max_network_resamples = 50;
};

struct GenProvenance {
  GenSpec spec;
  int interdep_resamples = 0;
  int network_resamples = 0;
  // The spanning skeleton here is a stand-in for the historical generator's
  // internal one; recorded so downstream consumers know the approximation.
  std::string skeleton_note =
      "random spanning structure; skeleton arcs at maximum cost";
};

struct GenResult {
  Instance instance;
  GenProvenance provenance;
};

// Deterministic in spec (including seed). Throws SolveError when a feasible
// instance cannot be produced within the resample budgets, ValidationError
// on nonsense specs.
GenResult generate(const GenSpec& spec);

// JSON rendering of the provenance sidecar.
std::string provenance_json(const GenProvenance& prov);

}  // namespace mcnfli::generator

#endif  // MCNFLI_GENERATOR_HPP_
