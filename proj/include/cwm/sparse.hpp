#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace cwm {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

struct SparseEntry {
  std::size_t index = 0;  // column index in a row view, row index in a column view
  double value = 0.0;
};

// Sparse real matrix kept in both row-major and column-major adjacency.
// The triplet list is retained verbatim so that validation can report
// duplicates and out-of-range indices; the adjacency views only hold
// in-range non-zero entries.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
      : rows_(rows), cols_(cols), triplets_(std::move(triplets)) {
    std::vector<Triplet> kept;
    kept.reserve(triplets_.size());
    for (const Triplet& t : triplets_) {
      if (t.row < rows_ && t.col < cols_ && t.value != 0.0) kept.push_back(t);
    }

    std::stable_sort(kept.begin(), kept.end(), [](const Triplet& x, const Triplet& y) {
      return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    row_ptr_.assign(rows_ + 1, 0);
    row_entries_.reserve(kept.size());
    for (const Triplet& t : kept) {
      ++row_ptr_[t.row + 1];
      row_entries_.push_back({t.col, t.value});
    }
    for (std::size_t i = 0; i < rows_; ++i) row_ptr_[i + 1] += row_ptr_[i];

    std::stable_sort(kept.begin(), kept.end(), [](const Triplet& x, const Triplet& y) {
      return x.col != y.col ? x.col < y.col : x.row < y.row;
    });
    col_ptr_.assign(cols_ + 1, 0);
    col_entries_.reserve(kept.size());
    for (const Triplet& t : kept) {
      ++col_ptr_[t.col + 1];
      col_entries_.push_back({t.row, t.value});
    }
    for (std::size_t j = 0; j < cols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return row_entries_.size(); }

  std::span<const SparseEntry> row(std::size_t i) const {
    return {row_entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  std::span<const SparseEntry> col(std::size_t j) const {
    return {col_entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  const std::vector<Triplet>& triplets() const noexcept { return triplets_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> triplets_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<SparseEntry> row_entries_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<SparseEntry> col_entries_;
};

}  // namespace cwm
