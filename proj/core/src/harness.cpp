// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"
#include "mcnfli/dimacs.hpp"
#include "mcnfli/rng.hpp"
#include "mcnfli/simplex.hpp"
#include "mcnfli/types.hpp"

namespace mcnfli::harness {
namespace {

constexpr std::uint64_t kSubTrialSeed = 201;

// Relative error with an absolute-difference fallback for near-zero
// references, so records never hold NaN/inf.
double safe_relative(double value, double reference) {
  const double diff = std::abs(value - reference);
  if (std::abs(reference) <= kTol) return diff;
  return diff / std::abs(reference);
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

TrialRecord run_one_trial(const HarnessConfig& config, int group, int trial) {
  TrialRecord rec;
  rec.group = group;
  rec.trial = trial;
  rec.seed = trial_seed(config.master_seed, group, trial);
  try {
    generator::GenSpec gen = config.groups[static_cast<std::size_t>(group)].gen;
    gen.seed = rec.seed;
    const generator::GenResult gr = generator::generate(gen);
    const Instance& inst = gr.instance;
    rec.nodes = static_cast<int>(inst.nodes.size());
    rec.arcs = static_cast<int>(inst.arcs.size());
    rec.interdeps = static_cast<int>(inst.interdeps.size());

    const approx::BnBResult exact = approx::solve_bidm(inst);
    if (exact.status != SolveStatus::Optimal)
      throw SolveError("harness: exact solve did not reach an optimum");
    rec.milp_objective = exact.objective;
    rec.bnb_nodes = exact.nodes_explored;

    const SolveResult lp = solve(approx::relax(inst));
    if (lp.status != SolveStatus::Optimal)
      throw SolveError("harness: relaxation solve did not reach an optimum");
    rec.lp_objective = lp.objective;
    rec.lp_relative_error = safe_relative(lp.objective, exact.objective);

    rec.schemes.reserve(config.schemes.size());
    for (const LabeledScheme& ls : config.schemes) {
      approx::RoundingScheme scheme = ls.scheme;
      scheme.seed = rec.seed;
      const approx::RoundingOutcome out =
          approx::round(inst, scheme, rec.milp_objective);
      SchemeOutcome so;
      so.label = ls.label;
      so.status = out.status;
      so.attempts = out.attempts;
      so.objective = out.objective;
      so.relative_error = out.relative_error;
      rec.schemes.push_back(std::move(so));
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.schemes.clear();
  }
  return rec;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

const char* kCsvHeader =
    "group,trial,seed,nodes,arcs,interdeps,ok,error,milp_objective,"
    "lp_objective,lp_relative_error,bnb_nodes,scheme,scheme_status,"
    "scheme_attempts,scheme_objective,scheme_relative_error";

}  // namespace

std::vector<LabeledScheme> default_schemes() {
  using approx::SchemeFamily;
  std::vector<LabeledScheme> out;
  for (const auto family : {SchemeFamily::Child, SchemeFamily::Parent}) {
    const char* base = family == SchemeFamily::Child ? "child" : "parent";
    for (const double eps : {0.0, 0.01, 0.05}) {
      LabeledScheme ls;
      std::ostringstream label;
      label << base << "-";
      label.setf(std::ios::fixed);
      label.precision(2);
      label << eps;
      ls.label = label.str();
      ls.scheme.family = family;
      ls.scheme.epsilon = eps;
      out.push_back(std::move(ls));
    }
  }
  LabeledScheme fair;
  fair.label = "fair";
  fair.scheme.family = SchemeFamily::Fair;
  out.push_back(std::move(fair));
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int group, int trial) {
  const std::uint64_t cell = (static_cast<std::uint64_t>(group) << 32) |
                             static_cast<std::uint64_t>(trial);
  return rng::keyed(master_seed, cell, kSubTrialSeed);
}

HarnessResult run_trials(const HarnessConfig& config) {
  if (config.trials < 1) throw ValidationError("harness: trials must be >= 1");
  const int groups = static_cast<int>(config.groups.size());
  const int jobs = groups * config.trials;
  HarnessResult result;
  result.records.resize(static_cast<std::size_t>(jobs));

  int threads = config.threads;
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, jobs));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int job = next.fetch_add(1);
      if (job >= jobs) return;
      const int group = job / config.trials;
      const int trial = job % config.trials;
      result.records[static_cast<std::size_t>(job)] =
          run_one_trial(config, group, trial);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  result.summaries = summarize(config, result.records);
  return result;
}

std::vector<GroupSummary> summarize(const HarnessConfig& config,
                                    const std::vector<TrialRecord>& records) {
  std::vector<GroupSummary> out(config.groups.size());
  for (std::size_t g = 0; g < config.groups.size(); ++g)
    out[g].name = config.groups[g].name;

  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    GroupSummary& gs = out[g];
    std::vector<double> lp_errors;
    std::vector<double> bnb_nodes;
    // label -> (errors over feasible, failed count)
    std::vector<std::vector<double>> scheme_errors(config.schemes.size());
    std::vector<int> scheme_failed(config.schemes.size(), 0);

    for (const TrialRecord& rec : records) {
      if (rec.group != static_cast<int>(g)) continue;
      if (!rec.ok) {
        ++gs.trials_failed;
        continue;
      }
      ++gs.trials_ok;
      lp_errors.push_back(rec.lp_relative_error);
      bnb_nodes.push_back(static_cast<double>(rec.bnb_nodes));
      for (std::size_t s = 0; s < config.schemes.size(); ++s) {
        const std::string& label = config.schemes[s].label;
        for (const SchemeOutcome& so : rec.schemes) {
          if (so.label != label) continue;
          if (so.status == approx::RoundingStatus::Feasible) {
            const double err = so.relative_error
                                   ? *so.relative_error
                                   : safe_relative(so.objective,
                                                   rec.milp_objective);
            scheme_errors[s].push_back(err);
          } else {
            ++scheme_failed[s];
          }
          break;
        }
      }
    }

    std::tie(gs.lp_mean_error, gs.lp_std_error) = mean_std(lp_errors);
    gs.mean_bnb_nodes = mean_std(bnb_nodes).first;
    for (std::size_t s = 0; s < config.schemes.size(); ++s) {
      SchemeSummary ss;
      ss.label = config.schemes[s].label;
      ss.feasible = static_cast<int>(scheme_errors[s].size());
      ss.failed = scheme_failed[s];
      std::tie(ss.mean_error, ss.std_error) = mean_std(scheme_errors[s]);
      const int total = ss.feasible + ss.failed;
      ss.failure_rate =
          total > 0 ? static_cast<double>(ss.failed) / total : 0.0;
      gs.schemes.push_back(std::move(ss));
    }
  }
  return out;
}

void write_records_csv(const std::vector<TrialRecord>& records,
                       std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const TrialRecord& rec : records) {
    std::ostringstream prefix;
    prefix << rec.group << ',' << rec.trial << ',' << rec.seed << ','
           << rec.nodes << ',' << rec.arcs << ',' << rec.interdeps << ','
           << (rec.ok ? 1 : 0) << ',' << csv_escape(rec.error) << ','
           << format_double(rec.milp_objective) << ','
           << format_double(rec.lp_objective) << ','
           << format_double(rec.lp_relative_error) << ','
           << rec.bnb_nodes;
    if (rec.schemes.empty()) {
      out << prefix.str() << ",,,,,\n";
      continue;
    }
    for (const SchemeOutcome& so : rec.schemes) {
      out << prefix.str() << ',' << csv_escape(so.label) << ','
          << (so.status == approx::RoundingStatus::Feasible ? "feasible"
                                                            : "failed")
          << ',' << so.attempts << ','
          << format_double(so.objective) << ',';
      if (so.relative_error) out << format_double(*so.relative_error);
      out << "\n";
    }
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::vector<TrialRecord> records;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("records csv: empty input");
  if (csv_split(line) != csv_split(kCsvHeader))
    throw ParseError("records csv: unexpected header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = csv_split(line);
    if (f.size() != 17) {
      std::ostringstream oss;
      oss << "records csv line " << lineno << ": expected 17 fields, got "
          << f.size();
      throw ParseError(oss.str());
    }
    const int group = std::atoi(f[0].c_str());
    const int trial = std::atoi(f[1].c_str());
    if (records.empty() || records.back().group != group ||
        records.back().trial != trial) {
      TrialRecord rec;
      rec.group = group;
      rec.trial = trial;
      rec.seed = std::strtoull(f[2].c_str(), nullptr, 10);
      rec.nodes = std::atoi(f[3].c_str());
      rec.arcs = std::atoi(f[4].c_str());
      rec.interdeps = std::atoi(f[5].c_str());
      rec.ok = f[6] == "1";
      rec.error = f[7];
      rec.milp_objective = std::strtod(f[8].c_str(), nullptr);
      rec.lp_objective = std::strtod(f[9].c_str(), nullptr);
      rec.lp_relative_error = std::strtod(f[10].c_str(), nullptr);
      rec.bnb_nodes = std::atol(f[11].c_str());
      records.push_back(std::move(rec));
    }
    if (!f[12].empty()) {
      SchemeOutcome so;
      so.label = f[12];
      so.status = f[13] == "feasible" ? approx::RoundingStatus::Feasible
                                      : approx::RoundingStatus::Failed;
      so.attempts = std::atoi(f[14].c_str());
      so.objective = std::strtod(f[15].c_str(), nullptr);
      if (!f[16].empty())
        so.relative_error = std::strtod(f[16].c_str(), nullptr);
      records.back().schemes.push_back(std::move(so));
    }
  }
  return records;
}

std::string summaries_json(const std::vector<GroupSummary>& summaries) {
  nlohmann::json j = nlohmann::json::array();
  for (const GroupSummary& gs : summaries) {
    nlohmann::json schemes = nlohmann::json::array();
    for (const SchemeSummary& ss : gs.schemes) {
      schemes.push_back({{"label", ss.label},
                         {"feasible", ss.feasible},
                         {"failed", ss.failed},
                         {"mean_error", ss.mean_error},
                         {"std_error", ss.std_error},
                         {"failure_rate", ss.failure_rate}});
    }
    j.push_back({{"name", gs.name},
                 {"trials_ok", gs.trials_ok},
                 {"trials_failed", gs.trials_failed},
                 {"lp_mean_error", gs.lp_mean_error},
                 {"lp_std_error", gs.lp_std_error},
                 {"mean_bnb_nodes", gs.mean_bnb_nodes},
                 {"schemes", schemes}});
  }
  return j.dump(2);
}

}  // namespace mcnfli::harness
