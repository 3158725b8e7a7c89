// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Experiment harness: runs trial groups of generated instances, solving each
// exactly and with a panel of rounding schemes, and aggregates the results.
// Trials are independent (per-trial seeds derived from one master seed) and
// run on a small thread pool; records round-trip through CSV so summaries can
// always be recomputed offline.

#ifndef MCNFLI_HARNESS_HPP_
#define MCNFLI_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcnfli/approx.hpp"
#include "mcnfli/generator.hpp"

namespace mcnfli::harness {

struct GroupSpec {
  std::string name;
  generator::GenSpec gen;  // the seed field is ignored; trial seeds are derived
};

struct LabeledScheme {
  std::string label;
  approx::RoundingScheme scheme;  // the seed field is overwritten per trial
};

// The standard panel: Child and Parent at clamps 0, 0.01, 0.05, plus Fair.
std::vector<LabeledScheme> default_schemes();

struct SchemeOutcome {
  std::string label;
  approx::RoundingStatus status = approx::RoundingStatus::Failed;
  int attempts = 0;
  double objective = 0.0;  // meaningful when feasible
  std::optional<double> relative_error;
};

struct TrialRecord {
  int group = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int nodes = 0;
  int arcs = 0;
  int interdeps = 0;
  bool ok = false;
  std::string error;  // set when !ok
  double milp_objective = 0.0;
  double lp_objective = 0.0;
  double lp_relative_error = 0.0;
  long bnb_nodes = 0;
  std::vector<SchemeOutcome> schemes;
};

struct SchemeSummary {
  std::string label;
  int feasible = 0;
  int failed = 0;
  double mean_error = 0.0;  // over feasible trials
  double std_error = 0.0;   // sample standard deviation
  double failure_rate = 0.0;
};

struct GroupSummary {
  std::string name;
  int trials_ok = 0;
  int trials_failed = 0;
  double lp_mean_error = 0.0;
  double lp_std_error = 0.0;
  double mean_bnb_nodes = 0.0;
  std::vector<SchemeSummary> schemes;
};

struct HarnessConfig {
  std::vector<GroupSpec> groups;
  int trials = 30;
  std::vector<LabeledScheme> schemes = default_schemes();
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t master_seed = 2026;
};

struct HarnessResult {
  std::vector<TrialRecord> records;    // ordered by (group, trial)
  std::vector<GroupSummary> summaries;  // one per group, in config order
};

// Derives the seed of one trial from the master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, int group, int trial);

// Runs every (group, trial) cell. Per-trial failures (solver errors,
// generator exhaustion) are captured in the record, never thrown.
HarnessResult run_trials(const HarnessConfig& config);

// Recompute group summaries from raw records (the same aggregation
// run_trials applies).
std::vector<GroupSummary> summarize(const HarnessConfig& config,
                                    const std::vector<TrialRecord>& records);

// Long-form CSV: one row per (trial, scheme); trial columns repeat. A failed
// trial emits a single row with an empty scheme label.
void write_records_csv(const std::vector<TrialRecord>& records,
                       std::ostream& out);
std::vector<TrialRecord> read_records_csv(std::istream& in);

// JSON rendering of the summaries.
std::string summaries_json(const std::vector<GroupSummary>& summaries);

}  // namespace mcnfli::harness

#endif  // MCNFLI_HARNESS_HPP_
