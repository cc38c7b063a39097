#pragma once

#include "mspgw/rational.hpp"

#include <optional>
#include <vector>

namespace mspgw {

// Dense exact linear solve A x = b by fraction-free-ish Gaussian elimination
// over the rationals. Reports consistency and the kernel dimension of A; when
// consistent, returns one solution with free variables set to zero.
struct LinearSolveResult {
  bool consistent = false;
  int kernel_dim = 0;
  std::vector<Rational> solution;  // present iff consistent
  int rank = 0;
};

inline LinearSolveResult solve_exact(std::vector<std::vector<Rational>> a,
                                     std::vector<Rational> b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col_of_row;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && a[sel][c].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[r]);
    std::swap(b[sel], b[r]);
    Rational inv = a[r][c].inverse();
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col_of_row.push_back(static_cast<int>(c));
    ++r;
  }
  LinearSolveResult res;
  res.rank = static_cast<int>(r);
  res.kernel_dim = static_cast<int>(cols) - res.rank;
  for (size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) {
      res.consistent = false;
      return res;
    }
  res.consistent = true;
  res.solution.assign(cols, Rational(0));
  for (size_t i = 0; i < r; ++i)
    res.solution[static_cast<size_t>(pivot_col_of_row[i])] = b[i];
  return res;
}

}  // namespace mspgw
