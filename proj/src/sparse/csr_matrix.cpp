#include "nsoc/sparse/csr_matrix.hpp"

#include "nsoc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nsoc::sparse {

namespace {

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

CsrMatrix CsrMatrix::from_triplets(Index n_rows, Index n_cols, std::span<const Triplet> entries) {
  if (n_rows < 0 || n_cols < 0) throw DimensionError("from_triplets: negative dimension");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw DimensionError("from_triplets: entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                           ") outside " + shape(n_rows, n_cols));
  }

  // Counting sort by row, then stable sort by column within each row so
  // duplicates are summed in input order.
  std::vector<Index> count(static_cast<std::size_t>(n_rows) + 1, 0);
  for (const Triplet& t : entries) ++count[t.row + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> order(entries.size());
  {
    std::vector<Index> next(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < entries.size(); ++k) order[next[entries[k].row]++] = k;
  }

  CsrMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_offsets_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  m.col_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (Index r = 0; r < n_rows; ++r) {
    auto first = order.begin() + count[r];
    auto last = order.begin() + count[r + 1];
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) { return entries[a].col < entries[b].col; });
    for (auto it = first; it != last; ++it) {
      const Triplet& t = entries[*it];
      if (m.col_indices_.size() > static_cast<std::size_t>(m.row_offsets_[r]) && m.col_indices_.back() == t.col)
        m.values_.back() += t.value;
      else {
        m.col_indices_.push_back(t.col);
        m.values_.push_back(t.value);
      }
    }
    m.row_offsets_[r + 1] = static_cast<Index>(m.values_.size());
  }
  return m;
}

CsrMatrix CsrMatrix::from_csr(Index n_rows, Index n_cols, std::vector<Index> row_offsets,
                              std::vector<Index> col_indices, std::vector<double> values) {
  if (n_rows < 0 || n_cols < 0) throw DimensionError("from_csr: negative dimension");
  if (row_offsets.size() != static_cast<std::size_t>(n_rows) + 1 || row_offsets.front() != 0 ||
      static_cast<std::size_t>(row_offsets.back()) != values.size() || col_indices.size() != values.size())
    throw DimensionError("from_csr: inconsistent array lengths");
  for (Index r = 0; r < n_rows; ++r) {
    if (row_offsets[r + 1] < row_offsets[r]) throw DimensionError("from_csr: decreasing row offsets");
    for (Index k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= n_cols) throw DimensionError("from_csr: column out of range");
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
        throw DimensionError("from_csr: columns not strictly increasing in row " + std::to_string(r));
    }
  }
  CsrMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  return m;
}

CsrMatrix CsrMatrix::zero(Index n_rows, Index n_cols) {
  return from_csr(n_rows, n_cols, std::vector<Index>(static_cast<std::size_t>(n_rows) + 1, 0), {}, {});
}

CsrMatrix CsrMatrix::identity(Index n) { return diagonal(Vector(static_cast<std::size_t>(n), 1.0)); }

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  std::vector<Index> offsets(d.size() + 1);
  std::iota(offsets.begin(), offsets.end(), 0);
  std::vector<Index> cols(d.size());
  std::iota(cols.begin(), cols.end(), 0);
  return from_csr(n, n, std::move(offsets), std::move(cols), Vector(d.begin(), d.end()));
}

std::vector<Triplet> CsrMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (Index r = 0; r < n_rows_; ++r)
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) out.push_back({r, col_indices_[k], values_[k]});
  return out;
}

double CsrMatrix::coeff(Index row, Index col) const {
  if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) throw DimensionError("coeff: index out of range");
  const auto first = col_indices_.begin() + row_offsets_[row];
  const auto last = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? values_[it - col_indices_.begin()] : 0.0;
}

Vector CsrMatrix::spmv(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(n_rows_));
  spmv(x, y);
  return y;
}

void CsrMatrix::spmv(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_cols_) || y.size() != static_cast<std::size_t>(n_rows_))
    throw DimensionError("spmv: matrix " + shape(n_rows_, n_cols_) + " vs x " + std::to_string(x.size()) + ", y " +
                         std::to_string(y.size()));
  simd::active().spmv_csr(n_rows_, row_offsets_.data(), col_indices_.data(), values_.data(), x.data(), y.data());
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t;
  t.n_rows_ = n_cols_;
  t.n_cols_ = n_rows_;
  t.row_offsets_.assign(static_cast<std::size_t>(n_cols_) + 1, 0);
  for (Index c : col_indices_) ++t.row_offsets_[c + 1];
  std::partial_sum(t.row_offsets_.begin(), t.row_offsets_.end(), t.row_offsets_.begin());
  t.col_indices_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<Index> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
  for (Index r = 0; r < n_rows_; ++r)
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const Index dst = next[col_indices_[k]]++;
      t.col_indices_[dst] = r;
      t.values_[dst] = values_[k];
    }
  return t;
}

CsrMatrix CsrMatrix::scaled(double factor) const {
  CsrMatrix s = *this;
  for (double& v : s.values_) v *= factor;
  return s;
}

CsrMatrix CsrMatrix::plus_diagonal(std::span<const double> d) const {
  if (n_rows_ != n_cols_ || d.size() != static_cast<std::size_t>(n_rows_))
    throw DimensionError("plus_diagonal: need square matrix and matching diagonal");
  CsrMatrix out;
  out.n_rows_ = n_rows_;
  out.n_cols_ = n_cols_;
  out.row_offsets_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);
  out.col_indices_.reserve(nnz() + d.size());
  out.values_.reserve(nnz() + d.size());
  for (Index r = 0; r < n_rows_; ++r) {
    bool placed = false;
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const Index c = col_indices_[k];
      if (!placed && c > r) {
        out.col_indices_.push_back(r);
        out.values_.push_back(d[r]);
        placed = true;
      }
      out.col_indices_.push_back(c);
      out.values_.push_back(c == r ? values_[k] + d[r] : values_[k]);
      placed = placed || c == r;
    }
    if (!placed) {
      out.col_indices_.push_back(r);
      out.values_.push_back(d[r]);
    }
    out.row_offsets_[r + 1] = static_cast<Index>(out.values_.size());
  }
  return out;
}

CsrMatrix CsrMatrix::with_unit_rows(std::span<const Index> rows) const {
  if (n_rows_ != n_cols_) throw DimensionError("with_unit_rows: matrix must be square");
  std::vector<char> replace(static_cast<std::size_t>(n_rows_), 0);
  for (Index r : rows) {
    if (r < 0 || r >= n_rows_) throw DimensionError("with_unit_rows: row out of range");
    replace[r] = 1;
  }
  CsrMatrix out;
  out.n_rows_ = n_rows_;
  out.n_cols_ = n_cols_;
  out.row_offsets_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);
  out.col_indices_.reserve(nnz());
  out.values_.reserve(nnz());
  for (Index r = 0; r < n_rows_; ++r) {
    if (replace[r]) {
      out.col_indices_.push_back(r);
      out.values_.push_back(1.0);
    } else {
      out.col_indices_.insert(out.col_indices_.end(), col_indices_.begin() + row_offsets_[r],
                              col_indices_.begin() + row_offsets_[r + 1]);
      out.values_.insert(out.values_.end(), values_.begin() + row_offsets_[r], values_.begin() + row_offsets_[r + 1]);
    }
    out.row_offsets_[r + 1] = static_cast<Index>(out.values_.size());
  }
  return out;
}

Vector CsrMatrix::diagonal_values() const {
  Vector d(static_cast<std::size_t>(std::min(n_rows_, n_cols_)), 0.0);
  for (Index r = 0; r < static_cast<Index>(d.size()); ++r) d[r] = coeff(r, r);
  return d;
}

Vector CsrMatrix::row_sums() const {
  Vector s(static_cast<std::size_t>(n_rows_), 0.0);
  for (Index r = 0; r < n_rows_; ++r)
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) s[r] += values_[k];
  return s;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool CsrMatrix::is_symmetric(double tol) const {
  if (n_rows_ != n_cols_) return false;
  for (Index r = 0; r < n_rows_; ++r)
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      if (std::abs(values_[k] - coeff(col_indices_[k], r)) > tol) return false;
  return true;
}

}  // namespace nsoc::sparse
