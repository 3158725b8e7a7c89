// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Text serialization of instances in an extended DIMACS minimum-cost-flow
// dialect:
//
//   c <comment>
//   p <mcnfli|bidm> <num_nodes> <num_arcs> <num_interdependencies>
//   n <node_id> <supply>
//   a <arc_id> <tail> <head> <capacity|inf> <cost>
//   i <parent_arc> <child_arc> <alpha> <beta>
//
// All ids are 1-based. "mcnfli" selects the linear (continuous) reading of
// the interdependencies, "bidm" the binary one. Nodes with zero supply may be
// omitted; arcs and interdependencies may not. Interdependence order in the
// file defines their index order.

#ifndef MCNFLI_DIMACS_HPP_
#define MCNFLI_DIMACS_HPP_

#include <iosfwd>
#include <string>

#include "mcnfli/instance.hpp"

namespace mcnfli {

// Parse an instance from a stream/string/file. Throws ParseError on
// malformed input. The parsed instance is validated structurally (ids
// contiguous etc.) but not semantically; call validate() for the full check.
Instance parse_dimacs(std::istream& in);
Instance parse_dimacs_string(const std::string& text);
Instance parse_dimacs_file(const std::string& path);

// Shortest decimal string that strtod parses back to exactly `value`
// ("inf"/"-inf" for infinities). Used by every text writer in the project so
// numbers round-trip bit-exactly.
std::string format_double(double value);

// Serialize. The output round-trips through parse_dimacs: numeric values are
// printed with enough digits to reproduce the double exactly.
void serialize_dimacs(const Instance& inst, std::ostream& out);
std::string serialize_dimacs_string(const Instance& inst);
void serialize_dimacs_file(const Instance& inst, const std::string& path);

}  // namespace mcnfli

#endif  // MCNFLI_DIMACS_HPP_
