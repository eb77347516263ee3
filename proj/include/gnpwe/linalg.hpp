#pragma once

// Exact sparse linear algebra over the rationals.
//
// Elimination is fraction-free: each row is scaled to a primitive integer
// vector, rows are combined as  p * r - r_c * pivot_row  and the content is
// divided out again, so no denominators ever appear during the sweep.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gnpwe/jet.hpp"

namespace gnpwe::linalg {

/// (column, value) pairs sorted by column, no explicit zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

class SparseMatrix {
 public:
  explicit SparseMatrix(std::size_t cols = 0) : cols_(cols) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<SparseRow>& row_data() const { return rows_; }

  /// Entries may come in any order; duplicates are summed, zeros dropped.
  void add_row(const std::vector<std::pair<std::size_t, Rational>>& entries);

  /// A x for a dense vector x of length cols().
  std::vector<Rational> apply(std::span<const Rational> x) const;

 private:
  std::size_t cols_;
  std::vector<SparseRow> rows_;
};

struct RowEchelon {
  /// Pivot column of each reduced row.
  std::vector<std::size_t> pivot_columns;
  /// Reduced rows as primitive integer vectors; column p_i appears only in row i.
  std::vector<std::vector<std::pair<std::size_t, mpz_class>>> rows;
  std::size_t cols = 0;

  std::size_t rank() const { return pivot_columns.size(); }
};

/// Fraction-free Gauss-Jordan reduction. Among rows eligible as pivot for a
/// column, the one whose entry has the smallest bit length wins.
RowEchelon reduce(const SparseMatrix& m);

std::size_t rank(const SparseMatrix& m);

/// Kernel basis, one vector per free column. Each vector is scaled so that
/// its first nonzero entry is 1.
std::vector<std::vector<Rational>> null_space(const SparseMatrix& m);

}  // namespace gnpwe::linalg
