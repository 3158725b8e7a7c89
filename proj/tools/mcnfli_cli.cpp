// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Command-line interface over the mcnfli core library.
//
// Exit codes: 0 success, 1 usage error, 2 parse/solve error, 3 no feasible
// solution under --require-feasible.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcnfli/approx.hpp"
#include "mcnfli/dimacs.hpp"
#include "mcnfli/generator.hpp"
#include "mcnfli/harness.hpp"
#include "mcnfli/simplex.hpp"
#include "mcnfli/types.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitError = 2;
constexpr int kExitInfeasible = 3;

mcnfli::Instance read_instance(const std::string& path) {
  if (path == "-") return mcnfli::parse_dimacs(std::cin);
  return mcnfli::parse_dimacs_file(path);
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mcnfli::SolveError("cannot open output file: " + path);
  out << text;
}

std::string status_name(mcnfli::SolveStatus s) {
  switch (s) {
    case mcnfli::SolveStatus::Optimal: return "optimal";
    case mcnfli::SolveStatus::Infeasible: return "infeasible";
    case mcnfli::SolveStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

std::string var_name(const mcnfli::VariableRef& v) {
  return (v.is_flow() ? "a" : "s") + std::to_string(v.index);
}

// Maps -0.0 to 0.0 so numerically equal outputs serialize identically.
double unsign_zero(double v) { return v == 0.0 ? 0.0 : v; }

json num_array(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(unsign_zero(x));
  return out;
}

json matrix_json(const mcnfli::Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(unsign_zero(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json names_json(const std::vector<mcnfli::VariableRef>& vars) {
  json out = json::array();
  for (const auto& v : vars) out.push_back(var_name(v));
  return out;
}

// Common solve/trace options.
struct SolveFlags {
  std::string rule = "dantzig";
  bool use_dhat = false;
  long max_iterations = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rule", rule, "Pricing rule")
        ->check(CLI::IsMember({"dantzig", "bland"}));
    cmd->add_option("--use-dhat", use_dhat,
                    "Drive linear solves with the reduced certificate matrix");
    cmd->add_option("--max-iterations", max_iterations,
                    "Pivot cap across both phases (0 = default)");
  }

  mcnfli::SolveOptions options() const {
    mcnfli::SolveOptions opt;
    opt.rule = rule == "bland" ? mcnfli::PricingRule::Bland
                               : mcnfli::PricingRule::Dantzig;
    opt.use_dhat = use_dhat;
    opt.max_iterations = max_iterations;
    return opt;
  }
};

mcnfli::BasisState load_basis(const mcnfli::Instance& inst,
                              const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mcnfli::SolveError("cannot open basis file: " + path);
  json j = json::parse(in);
  std::vector<int> basic_arcs, basic_slacks, upper_arcs;
  if (j.contains("basic")) {
    const json& b = j["basic"];
    if (b.contains("arcs")) basic_arcs = b["arcs"].get<std::vector<int>>();
    if (b.contains("slacks")) basic_slacks = b["slacks"].get<std::vector<int>>();
  }
  if (j.contains("upper") && j["upper"].contains("arcs"))
    upper_arcs = j["upper"]["arcs"].get<std::vector<int>>();
  return mcnfli::make_basis(inst, basic_arcs, basic_slacks, upper_arcs);
}

std::string solve_csv(const mcnfli::SolveResult& res, bool relaxed) {
  std::ostringstream out;
  out << "record,key,value\n";
  out << "meta,status," << status_name(res.status) << "\n";
  out << "meta,relaxed," << (relaxed ? 1 : 0) << "\n";
  out << "meta,objective," << mcnfli::format_double(res.objective) << "\n";
  out << "meta,iterations," << res.iterations << "\n";
  out << "meta,phase1_iterations," << res.phase1_iterations << "\n";
  for (std::size_t i = 0; i < res.flows.size(); ++i)
    out << "flow," << i + 1 << ',' << mcnfli::format_double(res.flows[i])
        << "\n";
  for (std::size_t t = 0; t < res.slacks.size(); ++t)
    out << "slack," << t << ',' << mcnfli::format_double(res.slacks[t])
        << "\n";
  return out.str();
}

int run_solve(const std::string& input, const std::string& output,
              const std::string& format, const SolveFlags& flags,
              bool require_feasible) {
  mcnfli::Instance inst = read_instance(input);
  const bool relaxed = inst.kind == mcnfli::ModelKind::Binary;
  if (relaxed) inst = mcnfli::approx::relax(inst);
  const mcnfli::SolveResult res = mcnfli::solve(inst, flags.options());
  if (format == "csv") {
    write_text(solve_csv(res, relaxed), output);
  } else {
    json j = {{"command", "solve"},
              {"status", status_name(res.status)},
              {"relaxed", relaxed},
              {"objective", res.objective},
              {"iterations", res.iterations},
              {"phase1_iterations", res.phase1_iterations},
              {"flows", num_array(res.flows)},
              {"slacks", num_array(res.slacks)}};
    write_text(j.dump(2) + "\n", output);
  }
  if (require_feasible && res.status != mcnfli::SolveStatus::Optimal)
    return kExitInfeasible;
  return kExitOk;
}

int run_solve_bidm(const std::string& input, const std::string& output,
                   const std::string& format, bool require_feasible) {
  const mcnfli::Instance inst = read_instance(input);
  const mcnfli::approx::BnBResult res = mcnfli::approx::solve_bidm(inst);
  if (format == "csv") {
    std::ostringstream out;
    out << "record,key,value\n";
    out << "meta,status," << status_name(res.status) << "\n";
    out << "meta,objective," << mcnfli::format_double(res.objective) << "\n";
    out << "meta,nodes_explored," << res.nodes_explored << "\n";
    for (std::size_t t = 0; t < res.y.size(); ++t)
      out << "y," << t << ',' << res.y[t] << "\n";
    for (std::size_t i = 0; i < res.flows.size(); ++i)
      out << "flow," << i + 1 << ',' << mcnfli::format_double(res.flows[i])
          << "\n";
    write_text(out.str(), output);
  } else {
    json j = {{"command", "solve-bidm"},
              {"status", status_name(res.status)},
              {"objective", res.objective},
              {"nodes_explored", res.nodes_explored},
              {"y", res.y},
              {"flows", num_array(res.flows)}};
    write_text(j.dump(2) + "\n", output);
  }
  if (require_feasible && res.status != mcnfli::SolveStatus::Optimal)
    return kExitInfeasible;
  return kExitOk;
}

int run_round(const std::string& input, const std::string& output,
              const std::string& format, const std::string& family,
              double epsilon, int max_attempts, std::uint64_t seed,
              std::optional<double> reference, bool require_feasible) {
  const mcnfli::Instance inst = read_instance(input);
  mcnfli::approx::RoundingScheme scheme;
  scheme.family = family == "parent" ? mcnfli::approx::SchemeFamily::Parent
                  : family == "fair" ? mcnfli::approx::SchemeFamily::Fair
                                     : mcnfli::approx::SchemeFamily::Child;
  scheme.epsilon = epsilon;
  scheme.max_attempts = max_attempts;
  scheme.seed = seed;
  const mcnfli::approx::RoundingOutcome out =
      mcnfli::approx::round(inst, scheme, reference);
  const bool feasible = out.status == mcnfli::approx::RoundingStatus::Feasible;
  if (format == "csv") {
    std::ostringstream os;
    os << "record,key,value\n";
    os << "meta,status," << (feasible ? "feasible" : "failed") << "\n";
    os << "meta,attempts," << out.attempts << "\n";
    os << "meta,objective," << mcnfli::format_double(out.objective) << "\n";
    if (out.relative_error)
      os << "meta,relative_error,"
         << mcnfli::format_double(*out.relative_error) << "\n";
    for (std::size_t t = 0; t < out.y.size(); ++t)
      os << "y," << t << ',' << out.y[t] << "\n";
    for (std::size_t i = 0; i < out.flows.size(); ++i)
      os << "flow," << i + 1 << ',' << mcnfli::format_double(out.flows[i])
         << "\n";
    write_text(os.str(), output);
  } else {
    json j = {{"command", "round"},
              {"status", feasible ? "feasible" : "failed"},
              {"attempts", out.attempts},
              {"objective", out.objective},
              {"y", out.y},
              {"flows", num_array(out.flows)}};
    if (out.relative_error) j["relative_error"] = *out.relative_error;
    write_text(j.dump(2) + "\n", output);
  }
  if (require_feasible && !feasible) return kExitInfeasible;
  return kExitOk;
}

int run_generate(const mcnfli::generator::GenSpec& spec,
                 const std::string& output, std::string provenance_path) {
  const mcnfli::generator::GenResult res = mcnfli::generator::generate(spec);
  mcnfli::serialize_dimacs_file(res.instance, output);
  if (provenance_path.empty()) provenance_path = output + ".provenance.json";
  write_text(mcnfli::generator::provenance_json(res.provenance) + "\n",
             provenance_path);
  std::cout << "wrote " << output << " (" << res.instance.nodes.size()
            << " nodes, " << res.instance.arcs.size() << " arcs, "
            << res.instance.interdeps.size() << " interdependencies)\n";
  return kExitOk;
}

mcnfli::harness::HarnessConfig parse_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mcnfli::SolveError("cannot open config file: " + path);
  json j = json::parse(in);
  mcnfli::harness::HarnessConfig cfg;
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.threads = j.value("threads", cfg.threads);
  if (!j.contains("groups") || !j["groups"].is_array() || j["groups"].empty())
    throw mcnfli::ValidationError("bench config: needs a non-empty groups[]");
  int index = 0;
  for (const json& g : j["groups"]) {
    mcnfli::harness::GroupSpec gs;
    gs.name = g.value("name", "group" + std::to_string(index));
    mcnfli::generator::GenSpec& s = gs.gen;
    s.nodes = g.value("nodes", s.nodes);
    s.arcs_per_node = g.value("arcs_per_node", s.arcs_per_node);
    s.source_frac = g.value("source_frac", s.source_frac);
    s.sink_frac = g.value("sink_frac", s.sink_frac);
    s.cost_min = g.value("cost_min", s.cost_min);
    s.cost_max = g.value("cost_max", s.cost_max);
    s.cap_min = g.value("cap_min", s.cap_min);
    s.cap_max = g.value("cap_max", s.cap_max);
    s.supply_per_256 = g.value("supply_per_256", s.supply_per_256);
    s.interdep_frac = g.value("interdep_frac", s.interdep_frac);
    s.ensure_feasible = g.value("ensure_feasible", s.ensure_feasible);
    const std::string mode = g.value("mode", "unstructured");
    if (mode == "structured") {
      s.mode = mcnfli::generator::InterdepMode::Structured;
    } else if (mode == "unstructured") {
      s.mode = mcnfli::generator::InterdepMode::Unstructured;
    } else {
      throw mcnfli::ValidationError("bench config: unknown mode '" + mode +
                                    "'");
    }
    cfg.groups.push_back(std::move(gs));
    ++index;
  }
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const json& s : j["schemes"]) {
      mcnfli::harness::LabeledScheme ls;
      const std::string family = s.value("family", "child");
      ls.scheme.family = family == "parent"
                             ? mcnfli::approx::SchemeFamily::Parent
                         : family == "fair"
                             ? mcnfli::approx::SchemeFamily::Fair
                             : mcnfli::approx::SchemeFamily::Child;
      ls.scheme.epsilon = s.value("epsilon", 0.0);
      ls.scheme.max_attempts = s.value("max_attempts", 1000);
      ls.label = s.value("label", family + "-" + std::to_string(
                                      ls.scheme.epsilon));
      cfg.schemes.push_back(std::move(ls));
    }
    if (cfg.schemes.empty())
      throw mcnfli::ValidationError("bench config: schemes[] may not be empty");
  }
  return cfg;
}

int run_bench(const std::string& config_path, const std::string& records_path,
              const std::string& summary_path, std::optional<int> trials,
              std::optional<int> threads, std::optional<std::uint64_t> seed) {
  mcnfli::harness::HarnessConfig cfg = parse_bench_config(config_path);
  if (trials) cfg.trials = *trials;
  if (threads) cfg.threads = *threads;
  if (seed) cfg.master_seed = *seed;
  const mcnfli::harness::HarnessResult res = mcnfli::harness::run_trials(cfg);
  if (!records_path.empty()) {
    std::ofstream out(records_path);
    if (!out)
      throw mcnfli::SolveError("cannot open records file: " + records_path);
    mcnfli::harness::write_records_csv(res.records, out);
  }
  write_text(mcnfli::harness::summaries_json(res.summaries) + "\n",
             summary_path);
  return kExitOk;
}

json pivot_json(const mcnfli::PivotPlan& plan) {
  json j = {{"entering", var_name(plan.entering)},
            {"direction", plan.direction},
            {"reduced_cost", plan.entering_reduced_cost},
            {"theta", unsign_zero(plan.theta)},
            {"unbounded", plan.unbounded},
            {"bound_flip", plan.bound_flip},
            {"case", plan.case_tag == mcnfli::PivotCase::BetweenTrees
                         ? "between_trees"
                         : "within_tree"}};
  if (!plan.unbounded) {
    j["blocking"] = var_name(plan.blocking);
    j["blocking_bound"] =
        plan.blocking_bound == mcnfli::VarLocation::Upper ? "upper" : "lower";
  }
  return j;
}

json trace_json(const mcnfli::TraceRecord& tr) {
  json j = {{"phase", tr.phase},
            {"iteration", tr.iteration},
            {"objective", tr.objective},
            {"net", {{"tree", num_array(tr.net.tree)}, {"interdep", num_array(tr.net.interdep)}}},
            {"arc_flow", num_array(tr.arc_flow)},
            {"slack", num_array(tr.slack)},
            {"potentials",
             {{"node", num_array(tr.potentials.node)},
              {"interdep", num_array(tr.potentials.interdep)},
              {"node_guess", num_array(tr.potentials.node_guess)},
              {"tree_shift", num_array(tr.potentials.tree_shift)}}},
            {"d", matrix_json(tr.d)},
            {"d_cols", names_json(tr.d_cols)},
            {"dhat", matrix_json(tr.dhat)},
            {"dhat_cols", names_json(tr.dhat_cols)}};
  j["pivot"] = tr.pivot ? pivot_json(*tr.pivot) : json();
  return j;
}

int run_trace(const std::string& input, const std::string& output,
              const SolveFlags& flags, const std::string& basis_path) {
  const mcnfli::Instance inst = read_instance(input);
  std::ostringstream lines;
  mcnfli::SolveOptions opt = flags.options();
  opt.trace = [&lines](const mcnfli::TraceRecord& tr) {
    lines << trace_json(tr).dump() << "\n";
  };
  mcnfli::SolveResult res;
  if (basis_path.empty()) {
    res = mcnfli::solve(inst, opt);
  } else {
    res = mcnfli::solve_from_basis(inst, load_basis(inst, basis_path), opt);
  }
  json tail = {{"result",
                {{"status", status_name(res.status)},
                 {"objective", res.objective},
                 {"iterations", res.iterations},
                 {"phase1_iterations", res.phase1_iterations}}}};
  lines << tail.dump() << "\n";
  write_text(lines.str(), output);
  return kExitOk;
}

void csv_matrix(std::ostringstream& out, const std::string& name,
                const mcnfli::Matrix& m,
                const std::vector<mcnfli::VariableRef>& cols,
                const std::vector<int>& row_tree,
                const std::vector<int>& row_interdep) {
  out << "matrix," << name << "\n";
  out << "row";
  for (const auto& v : cols) out << ',' << var_name(v);
  out << "\n";
  for (int r = 0; r < m.rows(); ++r) {
    if (r < static_cast<int>(row_tree.size())) {
      out << 'T' << row_tree[static_cast<std::size_t>(r)];
    } else {
      out << 'I'
          << row_interdep[static_cast<std::size_t>(r) - row_tree.size()];
    }
    for (int c = 0; c < m.cols(); ++c)
      out << ',' << mcnfli::format_double(m.at(r, c));
    out << "\n";
  }
}

int run_dump_basis(const std::string& input, const std::string& output,
                   const std::string& format, const std::string& basis_path) {
  const mcnfli::Instance inst = read_instance(input);
  const mcnfli::BasisState basis = load_basis(inst, basis_path);
  const mcnfli::CertMatrix cert = mcnfli::build_cert(inst, basis);
  const bool good = mcnfli::is_good(cert);
  if (format == "csv") {
    std::ostringstream out;
    out << "r," << cert.r << "\n";
    out << "tree_count," << cert.tree_count << "\n";
    out << "good," << (good ? 1 : 0) << "\n";
    csv_matrix(out, "d", cert.d, cert.col_vars, cert.row_tree,
               cert.row_interdep);
    csv_matrix(out, "dhat", cert.dhat, cert.dhat_cols, cert.dhat_row_tree,
               cert.dhat_row_interdep);
    write_text(out.str(), output);
  } else {
    json j = {{"r", cert.r},
              {"tree_count", cert.tree_count},
              {"good", good},
              {"d",
               {{"cols", names_json(cert.col_vars)},
                {"row_tree", cert.row_tree},
                {"row_interdep", cert.row_interdep},
                {"values", matrix_json(cert.d)}}},
              {"dhat",
               {{"cols", names_json(cert.dhat_cols)},
                {"row_tree", cert.dhat_row_tree},
                {"row_interdep", cert.dhat_row_interdep},
                {"values", matrix_json(cert.dhat)}}}};
    write_text(j.dump(2) + "\n", output);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcnfli: minimum-cost network flow with interdependencies"};
  app.require_subcommand(1);

  // Shared option storage.
  std::string input, output, format = "json", basis_path;
  bool require_feasible = false;
  SolveFlags flags;

  auto add_io = [&](CLI::App* cmd, bool needs_input = true) {
    if (needs_input)
      cmd->add_option("--input,-i", input, "Instance file ('-' = stdin)")
          ->required();
    cmd->add_option("--output,-o", output, "Output file (default stdout)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the linear model (binary instances are relaxed)");
  add_io(solve);
  flags.attach(solve);
  solve->add_flag("--require-feasible", require_feasible,
                  "Exit 3 unless an optimal solution is found");

  CLI::App* bidm = app.add_subcommand(
      "solve-bidm", "Solve the binary model exactly by branch-and-bound");
  add_io(bidm);
  bidm->add_flag("--require-feasible", require_feasible,
                 "Exit 3 unless an optimal solution is found");

  std::string scheme_family = "child";
  double epsilon = 0.0;
  int max_attempts = 1000;
  std::uint64_t seed = 1;
  double reference_value = 0.0;
  CLI::App* round = app.add_subcommand(
      "round", "Randomized rounding of the binary model");
  add_io(round);
  round->add_option("--scheme", scheme_family, "Probability family")
      ->check(CLI::IsMember({"child", "parent", "fair"}));
  round->add_option("--epsilon", epsilon, "Probability clamp in [0, 0.5]");
  round->add_option("--max-attempts", max_attempts, "Rounding attempts");
  round->add_option("--seed", seed, "Random seed");
  CLI::Option* ref_opt = round->add_option(
      "--reference", reference_value,
      "Reference objective for the reported relative error");
  round->add_flag("--require-feasible", require_feasible,
                  "Exit 3 unless a feasible assignment is found");

  mcnfli::generator::GenSpec gen_spec;
  std::string gen_mode = "unstructured", provenance_path;
  bool no_ensure = false;
  CLI::App* gen = app.add_subcommand("generate", "Generate a random instance");
  gen->add_option("--output,-o", output, "Instance file to write")->required();
  gen->add_option("--provenance", provenance_path,
                  "Provenance sidecar path (default <output>.provenance.json)");
  gen->add_option("--nodes", gen_spec.nodes, "Number of nodes");
  gen->add_option("--arcs-per-node", gen_spec.arcs_per_node, "Arcs per node");
  gen->add_option("--source-frac", gen_spec.source_frac, "Source fraction");
  gen->add_option("--sink-frac", gen_spec.sink_frac, "Sink fraction");
  gen->add_option("--cost-min", gen_spec.cost_min, "Minimum arc cost");
  gen->add_option("--cost-max", gen_spec.cost_max, "Maximum arc cost");
  gen->add_option("--cap-min", gen_spec.cap_min, "Minimum arc capacity");
  gen->add_option("--cap-max", gen_spec.cap_max, "Maximum arc capacity");
  gen->add_option("--supply-per-256", gen_spec.supply_per_256,
                  "Total supply per 256 nodes");
  gen->add_option("--mode", gen_mode, "Coupling placement")
      ->check(CLI::IsMember({"unstructured", "structured"}));
  gen->add_option("--interdep-frac", gen_spec.interdep_frac,
                  "Coupling density (fraction of arcs / of sinks)");
  gen->add_option("--seed", gen_spec.seed, "Random seed");
  gen->add_flag("--no-ensure-feasible", no_ensure,
                "Skip the feasibility probe");

  std::string config_path, records_path, summary_path;
  std::optional<int> bench_trials, bench_threads;
  std::optional<std::uint64_t> bench_seed;
  CLI::App* bench =
      app.add_subcommand("bench", "Run experiment groups from a JSON config");
  bench->add_option("--config", config_path, "JSON config file")->required();
  bench->add_option("--records", records_path, "Per-trial CSV output");
  bench->add_option("--summary", summary_path,
                    "Summary JSON output (default stdout)");
  bench->add_option("--trials", bench_trials, "Override trials per group");
  bench->add_option("--threads", bench_threads, "Override worker threads");
  bench->add_option("--seed", bench_seed, "Override master seed");

  CLI::App* trace = app.add_subcommand(
      "trace", "Solve and emit one JSON line per simplex iteration");
  add_io(trace);
  flags.attach(trace);
  trace->add_option("--basis", basis_path,
                    "Start from this basis file (phase 2 only)");

  CLI::App* dump = app.add_subcommand(
      "dump-basis", "Print the certificate matrices of a basis");
  add_io(dump);
  dump->add_option("--basis", basis_path, "Basis file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed())
      return run_solve(input, output, format, flags, require_feasible);
    if (bidm->parsed())
      return run_solve_bidm(input, output, format, require_feasible);
    if (round->parsed()) {
      std::optional<double> reference;
      if (ref_opt->count() > 0) reference = reference_value;
      return run_round(input, output, format, scheme_family, epsilon,
                       max_attempts, seed, reference, require_feasible);
    }
    if (gen->parsed()) {
      gen_spec.mode = gen_mode == "structured"
                          ? mcnfli::generator::InterdepMode::Structured
                          : mcnfli::generator::InterdepMode::Unstructured;
      gen_spec.ensure_feasible = !no_ensure;
      return run_generate(gen_spec, output, provenance_path);
    }
    if (bench->parsed())
      return run_bench(config_path, records_path, summary_path, bench_trials,
                       bench_threads, bench_seed);
    if (trace->parsed()) return run_trace(input, output, flags, basis_path);
    if (dump->parsed())
      return run_dump_basis(input, output, format, basis_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
