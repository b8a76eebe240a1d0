#pragma once

#include "nsoc/errors.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nsoc::sparse {

using Index = std::int32_t;
using Vector = std::vector<double>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Real sparse matrix in compressed-sparse-row layout.
//
// Within each row the column indices are strictly increasing and no (row, col)
// pair is stored twice. Explicit zeros are allowed. Immutable after
// construction; all "modifying" operations return a new matrix.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  // Duplicate (row, col) entries are summed. Throws DimensionError on
  // out-of-range indices.
  static CsrMatrix from_triplets(Index n_rows, Index n_cols, std::span<const Triplet> entries);

  // Validates the CSR invariants and throws DimensionError if they fail.
  static CsrMatrix from_csr(Index n_rows, Index n_cols, std::vector<Index> row_offsets,
                            std::vector<Index> col_indices, std::vector<double> values);

  static CsrMatrix zero(Index n_rows, Index n_cols);
  static CsrMatrix identity(Index n);
  static CsrMatrix diagonal(std::span<const double> d);

  Index rows() const noexcept { return n_rows_; }
  Index cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<Triplet> to_triplets() const;

  // Stored value at (row, col), zero if the entry is not stored.
  double coeff(Index row, Index col) const;

  Vector spmv(std::span<const double> x) const;
  void spmv(std::span<const double> x, std::span<double> y) const;

  CsrMatrix transpose() const;
  CsrMatrix scaled(double factor) const;

  // this + diag(d); inserts diagonal entries that are not stored.
  CsrMatrix plus_diagonal(std::span<const double> d) const;

  // Copy in which each listed row is replaced by the unit row e_r.
  CsrMatrix with_unit_rows(std::span<const Index> rows) const;

  Vector diagonal_values() const;
  Vector row_sums() const;
  double max_abs() const;
  bool is_symmetric(double tol = 0.0) const;

 private:
  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

}  // namespace nsoc::sparse
