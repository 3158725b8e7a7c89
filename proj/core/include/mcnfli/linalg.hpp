// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT
//
// Minimal dense linear algebra for the certificate systems the solver works
// with. These matrices are tiny (order r ≤ 3p), so simple Gaussian
// elimination with partial pivoting is both adequate and easy to audit.

#ifndef MCNFLI_LINALG_HPP_
#define MCNFLI_LINALG_HPP_

#include <vector>

#include "mcnfli/types.hpp"

namespace mcnfli {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  Matrix transposed() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Rank via Gaussian elimination with partial pivoting; entries with absolute
// value at most `tol` count as zero.
int matrix_rank(Matrix a, double tol = kTol);

// Solve the square system a·x = rhs. Returns false when the matrix is
// singular at tolerance `tol` (x is left unspecified). A 0×0 system succeeds
// with an empty solution.
bool solve_linear(Matrix a, std::vector<double> rhs, std::vector<double>& x,
                  double tol = kTol);

// Solve aᵀ·x = rhs.
bool solve_linear_transposed(const Matrix& a, std::vector<double> rhs,
                             std::vector<double>& x, double tol = kTol);

}  // namespace mcnfli

#endif  // MCNFLI_LINALG_HPP_
