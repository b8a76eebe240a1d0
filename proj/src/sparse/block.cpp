#include "nsoc/sparse/block.hpp"

#include <string>
#include <utility>

namespace nsoc::sparse {

BlockSpec::BlockSpec(std::size_t block_rows, std::size_t block_cols)
    : n_block_rows_(block_rows), n_block_cols_(block_cols), grid_(block_rows * block_cols) {
  if (block_rows == 0 || block_cols == 0) throw DimensionError("BlockSpec: empty grid");
}

BlockSpec::BlockSpec(std::vector<Index> row_heights, std::vector<Index> col_widths)
    : BlockSpec(row_heights.size(), col_widths.size()) {
  for (Index v : row_heights)
    if (v < 0) throw DimensionError("BlockSpec: negative block height");
  for (Index v : col_widths)
    if (v < 0) throw DimensionError("BlockSpec: negative block width");
  heights_ = std::move(row_heights);
  widths_ = std::move(col_widths);
}

BlockSpec& BlockSpec::set(std::size_t i, std::size_t j, const CsrMatrix& block, double scale) {
  if (i >= n_block_rows_ || j >= n_block_cols_) throw DimensionError("BlockSpec::set: block index out of range");
  grid_[i * n_block_cols_ + j] = Entry{&block, scale};
  return *this;
}

CsrMatrix assemble_block(const BlockSpec& spec) {
  const std::size_t br = spec.block_rows();
  const std::size_t bc = spec.block_cols();
  std::vector<Index> heights = spec.row_heights().empty() ? std::vector<Index>(br, -1) : spec.row_heights();
  std::vector<Index> widths = spec.col_widths().empty() ? std::vector<Index>(bc, -1) : spec.col_widths();

  auto claim = [](Index& slot, Index value, const char* what, std::size_t k) {
    if (slot >= 0 && slot != value)
      throw DimensionError(std::string("assemble_block: inconsistent ") + what + " in block " + std::to_string(k));
    slot = value;
  };
  for (std::size_t i = 0; i < br; ++i)
    for (std::size_t j = 0; j < bc; ++j)
      if (const CsrMatrix* m = spec.at(i, j).matrix) {
        claim(heights[i], m->rows(), "row height", i);
        claim(widths[j], m->cols(), "column width", j);
      }
  for (std::size_t i = 0; i < br; ++i)
    if (heights[i] < 0) throw DimensionError("assemble_block: block row " + std::to_string(i) + " is empty");
  for (std::size_t j = 0; j < bc; ++j)
    if (widths[j] < 0) throw DimensionError("assemble_block: block column " + std::to_string(j) + " is empty");

  std::vector<Index> row_start(br + 1, 0);
  std::vector<Index> col_start(bc + 1, 0);
  for (std::size_t i = 0; i < br; ++i) row_start[i + 1] = row_start[i] + heights[i];
  for (std::size_t j = 0; j < bc; ++j) col_start[j + 1] = col_start[j] + widths[j];

  std::size_t total = 0;
  for (std::size_t i = 0; i < br; ++i)
    for (std::size_t j = 0; j < bc; ++j)
      if (const CsrMatrix* m = spec.at(i, j).matrix) total += m->nnz();

  // Rows of distinct blocks in one block row occupy disjoint, increasing
  // column ranges, so appending block by block keeps each row sorted.
  std::vector<Index> offsets(static_cast<std::size_t>(row_start[br]) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(total);
  vals.reserve(total);
  for (std::size_t i = 0; i < br; ++i) {
    for (Index r = 0; r < heights[i]; ++r) {
      for (std::size_t j = 0; j < bc; ++j) {
        const auto& e = spec.at(i, j);
        if (!e.matrix) continue;
        const auto ro = e.matrix->row_offsets();
        const auto ci = e.matrix->col_indices();
        const auto va = e.matrix->values();
        for (Index k = ro[r]; k < ro[r + 1]; ++k) {
          cols.push_back(col_start[j] + ci[k]);
          vals.push_back(e.scale * va[k]);
        }
      }
      offsets[row_start[i] + r + 1] = static_cast<Index>(vals.size());
    }
  }
  return CsrMatrix::from_csr(row_start[br], col_start[bc], std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace nsoc::sparse
