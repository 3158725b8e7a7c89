// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/dimacs.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mcnfli {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // normalize negative zero
  char buf[64];
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

namespace {

double parse_number(const std::string& token, int line_no) {
  if (token == "inf" || token == "+inf") return kInf;
  if (token == "-inf") return -kInf;
  try {
    size_t pos = 0;
    const double value = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "line " << line_no << ": bad number '" << token << "'";
    throw ParseError(os.str());
  }
}

int parse_int(const std::string& token, int line_no) {
  try {
    size_t pos = 0;
    const int value = std::stoi(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "line " << line_no << ": bad integer '" << token << "'";
    throw ParseError(os.str());
  }
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

Instance parse_dimacs(std::istream& in) {
  Instance inst;
  bool saw_problem = false;
  int want_nodes = 0, want_arcs = 0, want_deps = 0;

  std::string line;
  int line_no = 0;
  std::vector<bool> node_seen;

  auto fail = [&](const std::string& what) -> void {
    std::ostringstream os;
    os << "line " << line_no << ": " << what;
    throw ParseError(os.str());
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "c") continue;

    if (kind == "p") {
      if (saw_problem) fail("duplicate problem line");
      if (tok.size() != 5) fail("problem line needs 4 fields");
      if (tok[1] == "mcnfli") {
        inst.kind = ModelKind::Linear;
      } else if (tok[1] == "bidm") {
        inst.kind = ModelKind::Binary;
      } else {
        fail("unknown problem type '" + tok[1] + "'");
      }
      want_nodes = parse_int(tok[2], line_no);
      want_arcs = parse_int(tok[3], line_no);
      want_deps = parse_int(tok[4], line_no);
      if (want_nodes < 0 || want_arcs < 0 || want_deps < 0) {
        fail("negative size in problem line");
      }
      saw_problem = true;
      for (int i = 0; i < want_nodes; ++i) inst.add_node(0.0);
      node_seen.assign(want_nodes, false);
      continue;
    }

    if (!saw_problem) fail("data line before problem line");

    if (kind == "n") {
      if (tok.size() != 3) fail("node line needs 2 fields");
      const int id = parse_int(tok[1], line_no);
      if (id < 1 || id > want_nodes) fail("node id out of range");
      if (node_seen[id - 1]) fail("duplicate supply for node");
      node_seen[id - 1] = true;
      inst.node(id).supply = parse_number(tok[2], line_no);
    } else if (kind == "a") {
      if (tok.size() != 6) fail("arc line needs 5 fields");
      const int id = parse_int(tok[1], line_no);
      if (id != inst.num_arcs() + 1) fail("arc ids must appear in order 1..n");
      const int tail = parse_int(tok[2], line_no);
      const int head = parse_int(tok[3], line_no);
      const double cap = parse_number(tok[4], line_no);
      const double cost = parse_number(tok[5], line_no);
      inst.add_arc(tail, head, cap, cost);
    } else if (kind == "i") {
      if (tok.size() != 5) fail("interdependence line needs 4 fields");
      const int parent = parse_int(tok[1], line_no);
      const int child = parse_int(tok[2], line_no);
      const double alpha = parse_number(tok[3], line_no);
      const double beta = parse_number(tok[4], line_no);
      inst.add_interdependence(parent, child, alpha, beta);
    } else {
      fail("unknown line type '" + kind + "'");
    }
  }

  if (!saw_problem) throw ParseError("missing problem line");
  if (inst.num_arcs() != want_arcs) {
    std::ostringstream os;
    os << "expected " << want_arcs << " arcs, found " << inst.num_arcs();
    throw ParseError(os.str());
  }
  if (inst.num_interdeps() != want_deps) {
    std::ostringstream os;
    os << "expected " << want_deps << " interdependencies, found "
       << inst.num_interdeps();
    throw ParseError(os.str());
  }
  return inst;
}

Instance parse_dimacs_string(const std::string& text) {
  std::istringstream is(text);
  return parse_dimacs(is);
}

Instance parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_dimacs(in);
}

void serialize_dimacs(const Instance& inst, std::ostream& out) {
  out << "p " << (inst.kind == ModelKind::Linear ? "mcnfli" : "bidm") << ' '
      << inst.num_nodes() << ' ' << inst.num_arcs() << ' '
      << inst.num_interdeps() << '\n';
  for (const NodeRecord& nd : inst.nodes) {
    if (nd.supply != 0.0) {
      out << "n " << nd.id << ' ' << format_double(nd.supply) << '\n';
    }
  }
  for (const ArcRecord& a : inst.arcs) {
    out << "a " << a.id << ' ' << a.tail << ' ' << a.head << ' '
        << format_double(a.capacity) << ' ' << format_double(a.cost) << '\n';
  }
  for (const Interdependence& dep : inst.interdeps) {
    out << "i " << dep.parent << ' ' << dep.child << ' '
        << format_double(dep.alpha) << ' ' << format_double(dep.beta) << '\n';
  }
}

std::string serialize_dimacs_string(const Instance& inst) {
  std::ostringstream os;
  serialize_dimacs(inst, os);
  return os.str();
}

void serialize_dimacs_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  serialize_dimacs(inst, out);
}

}  // namespace mcnfli
