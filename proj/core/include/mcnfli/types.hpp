// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Shared scalar types, tolerances, and error categories used across the
// library.

#ifndef MCNFLI_TYPES_HPP_
#define MCNFLI_TYPES_HPP_

#include <limits>
#include <stdexcept>
#include <string>

namespace mcnfli {

// Global comparison tolerance for primal/dual feasibility tests, rank
// decisions, and degeneracy detection. Everything in the library that needs
// an epsilon uses this one constant so behaviour is consistent.
inline constexpr double kTol = 1e-9;

// Sentinel for an uncapacitated arc.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Raised when input data fails validation (structural problems that make the
// model ill-posed rather than merely infeasible).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised when a solver hits a structural limit (iteration cap, singular
// certificate system, malformed basis) as opposed to a model outcome such as
// infeasibility, which is reported through a status value.
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed serialized inputs (network files, basis files).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcnfli

#endif  // MCNFLI_TYPES_HPP_
