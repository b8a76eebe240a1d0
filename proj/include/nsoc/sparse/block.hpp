#pragma once

#include "nsoc/sparse/csr_matrix.hpp"

#include <cstddef>
#include <vector>

namespace nsoc::sparse {

// Grid of optional sparse blocks, each with a scalar multiplier. Absent
// blocks are zero. Block-row heights and block-column widths are inferred
// from the present blocks unless given explicitly; without explicit sizes
// every block row and block column needs at least one present block.
class BlockSpec {
 public:
  BlockSpec(std::size_t block_rows, std::size_t block_cols);
  BlockSpec(std::vector<Index> row_heights, std::vector<Index> col_widths);

  // The referenced matrix must outlive the spec.
  BlockSpec& set(std::size_t i, std::size_t j, const CsrMatrix& block, double scale = 1.0);

  std::size_t block_rows() const noexcept { return n_block_rows_; }
  std::size_t block_cols() const noexcept { return n_block_cols_; }

  struct Entry {
    const CsrMatrix* matrix = nullptr;
    double scale = 1.0;
  };
  const Entry& at(std::size_t i, std::size_t j) const { return grid_.at(i * n_block_cols_ + j); }

  // Explicit sizes, empty when inferred.
  const std::vector<Index>& row_heights() const noexcept { return heights_; }
  const std::vector<Index>& col_widths() const noexcept { return widths_; }

 private:
  std::size_t n_block_rows_;
  std::size_t n_block_cols_;
  std::vector<Entry> grid_;
  std::vector<Index> heights_;
  std::vector<Index> widths_;
};

// Concatenate the blocks into one CSR matrix. Throws DimensionError when the
// block shapes disagree along a shared block row or column.
CsrMatrix assemble_block(const BlockSpec& spec);

}  // namespace nsoc::sparse
