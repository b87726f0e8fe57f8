#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wb/domain.hpp"
#include "wb/rop.hpp"
#include "wb/thread.hpp"

namespace wb {

// A matrix with countably many columns and either finitely many rows or
// row-eventually-constant infinitely many rows.  Every row is an eventually
// constant sequence, so every column is too, and column j equals the eventual
// column once j passes every row's prefix.
//
// Finite shape (alpha rows): rows_ holds all rows, tail_row_ is empty.
// Infinite shape: rows_ holds the lead rows, tail_row_ repeats forever after.
// The infinite form is canonical: trailing lead rows equal to the tail row
// are stripped.
class EvMatrix {
 public:
  EvMatrix(FiniteDomain domain, std::vector<EvThread> rows,
           std::optional<EvThread> tail_row = std::nullopt);

  // Builds the finite-shape matrix whose leading columns are `cols` (each of
  // length alpha) and whose remaining columns all equal `eventual`.
  static EvMatrix from_columns(FiniteDomain domain, const std::vector<Tuple>& cols,
                               const Tuple& eventual);
  // Same, infinite shape: columns are eventually constant sequences.
  static EvMatrix from_columns(FiniteDomain domain, const std::vector<EvThread>& cols,
                               const EvThread& eventual);

  FiniteDomain domain() const { return domain_; }
  bool is_omega() const { return tail_row_.has_value(); }
  // Number of stored rows: all of them (finite shape) or the lead (infinite).
  size_t lead_rows() const { return rows_.size(); }
  const EvThread& row(size_t i) const;
  const std::optional<EvThread>& tail_row() const { return tail_row_; }

  // Columns stabilise at this index: column j equals eventual_column for
  // every j >= stable_cols().
  size_t stable_cols() const;
  Tuple column_fin(size_t j) const;       // finite shape only
  EvThread column_omega(size_t j) const;  // infinite shape only
  Tuple eventual_column_fin() const;
  EvThread eventual_column_omega() const;

  // Row-wise application: coordinate i of the result is op evaluated on row i.
  Tuple apply_fin(const ROp& op) const;        // finite shape only
  EvThread apply_omega(const ROp& op) const;   // infinite shape only

  // Replaces columns 0..cols.size()-1, leaving later columns untouched.
  EvMatrix substitute_columns(const std::vector<Tuple>& cols) const;
  EvMatrix substitute_columns(const std::vector<EvThread>& cols) const;

  // Pairwise distinct rows; an infinite-shape matrix repeats its tail row and
  // is never row-injective.
  bool row_injective() const;

  std::string to_string() const;
  bool operator==(const EvMatrix& o) const;
  bool operator<(const EvMatrix& o) const;

 private:
  FiniteDomain domain_;
  std::vector<EvThread> rows_;
  std::optional<EvThread> tail_row_;
};

// All matrices whose columns are drawn from `pool`, with up to
// max_distinct_cols distinct column values: lead columns c_0..c_{l-1}
// followed by `eventual` forever, l + 1 <= max_distinct_cols, and the last
// lead column differs from the eventual one so each matrix appears once.
std::vector<EvMatrix> enumerate_matrices(FiniteDomain domain, const std::vector<Tuple>& pool,
                                         int max_distinct_cols);
std::vector<EvMatrix> enumerate_matrices(FiniteDomain domain, const std::vector<EvThread>& pool,
                                         int max_distinct_cols);

// All finite-shape matrices with 1..alpha_max pairwise distinct rows drawn
// from the canonical threads of prefix length <= prefix_max, rows in
// increasing order.  Row order does not affect any property checked through
// row-wise application, so one representative per row set suffices.
std::vector<EvMatrix> enumerate_row_injective(FiniteDomain domain, int alpha_max, int prefix_max);

}  // namespace wb
