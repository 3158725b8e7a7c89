// Copyright (c) 2026 The mcnfli authors
// SPDX-License-Identifier: MIT

#include "mcnfli/linalg.hpp"

#include <cmath>
#include <utility>

namespace mcnfli {

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      t.at(c, r) = at(r, c);
    }
  }
  return t;
}

int matrix_rank(Matrix a, double tol) {
  const int rows = a.rows();
  const int cols = a.cols();
  int rank = 0;
  int pivot_row = 0;
  for (int col = 0; col < cols && pivot_row < rows; ++col) {
    int best = pivot_row;
    double best_abs = std::abs(a.at(pivot_row, col));
    for (int r = pivot_row + 1; r < rows; ++r) {
      const double v = std::abs(a.at(r, col));
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    if (best_abs <= tol) continue;
    if (best != pivot_row) {
      for (int c = col; c < cols; ++c) {
        std::swap(a.at(best, c), a.at(pivot_row, c));
      }
    }
    const double pivot = a.at(pivot_row, col);
    for (int r = pivot_row + 1; r < rows; ++r) {
      const double factor = a.at(r, col) / pivot;
      if (factor == 0.0) continue;
      a.at(r, col) = 0.0;
      for (int c = col + 1; c < cols; ++c) {
        a.at(r, c) -= factor * a.at(pivot_row, c);
      }
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

bool solve_linear(Matrix a, std::vector<double> rhs, std::vector<double>& x,
                  double tol) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(rhs.size()) != n) {
    throw SolveError("solve_linear: dimension mismatch");
  }
  x.assign(n, 0.0);
  if (n == 0) return true;

  // Forward elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_abs = std::abs(a.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a.at(r, col));
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    if (best_abs <= tol) return false;
    if (best != col) {
      for (int c = col; c < n; ++c) std::swap(a.at(best, c), a.at(col, c));
      std::swap(rhs[best], rhs[col]);
    }
    const double pivot = a.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double factor = a.at(r, col) / pivot;
      if (factor == 0.0) continue;
      a.at(r, col) = 0.0;
      for (int c = col + 1; c < n; ++c) {
        a.at(r, c) -= factor * a.at(col, c);
      }
      rhs[r] -= factor * rhs[col];
    }
  }

  // Back substitution.
  for (int r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < n; ++c) acc -= a.at(r, c) * x[c];
    x[r] = acc / a.at(r, r);
  }
  return true;
}

bool solve_linear_transposed(const Matrix& a, std::vector<double> rhs,
                             std::vector<double>& x, double tol) {
  return solve_linear(a.transposed(), std::move(rhs), x, tol);
}

}  // namespace mcnfli
