#include "nsoc/sparse/direct_solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace nsoc::sparse {

namespace {

using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;
using EigenLu = Eigen::SparseLU<EigenCsc, Eigen::COLAMDOrdering<Index>>;

// Exposes the diagonal of U, which Eigen stores inside the supernodal L.
class InspectableLu : public EigenLu {
 public:
  // |U_jj| indexed by elimination step j.
  Vector pivots() const {
    Vector out(static_cast<std::size_t>(this->cols()), 0.0);
    for (Index j = 0; j < this->cols(); ++j)
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it)
        if (it.index() == j) {
          out[j] = std::abs(it.value());
          break;
        }
    return out;
  }
};

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

struct SparseLu::Impl {
  InspectableLu lu;
  Vector row_scale;
};

SparseLu::SparseLu(const CsrMatrix& m) : impl_(std::make_unique<Impl>()), n_(m.rows()) {
  if (m.rows() != m.cols()) throw DimensionError("SparseLu: matrix must be square");
  if (n_ == 0) return;

  // Rows are equilibrated by their largest magnitude before factorization,
  // so every pivot is measured against the original row it eliminates.
  impl_->row_scale.assign(static_cast<std::size_t>(n_), 0.0);
  for (Index r = 0; r < n_; ++r) {
    double big = 0.0;
    for (Index k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) big = std::max(big, std::abs(m.values()[k]));
    if (big == 0.0) throw SingularMatrixError(r, "SparseLu: row " + std::to_string(r) + " is structurally zero");
    impl_->row_scale[r] = 1.0 / big;
  }
  Vector scaled(m.values().begin(), m.values().end());
  for (Index r = 0; r < n_; ++r)
    for (Index k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) scaled[k] *= impl_->row_scale[r];

  Eigen::Map<const EigenCsr> view(m.rows(), m.cols(), static_cast<Index>(m.nnz()), m.row_offsets().data(),
                                  m.col_indices().data(), scaled.data());
  EigenCsc csc = view;
  csc.makeCompressed();

  impl_->lu.analyzePattern(csc);
  impl_->lu.factorize(csc);
  if (impl_->lu.info() != Eigen::Success)
    throw SingularMatrixError(-1, "SparseLu: factorization failed: " + impl_->lu.lastErrorMessage());

  const Vector pivots = impl_->lu.pivots();
  const auto& step_of_row = impl_->lu.rowsPermutation().indices();
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < n_; ++r) {
    const double pivot = pivots[step_of_row[r]];
    min_pivot_ = std::min(min_pivot_, pivot);
    if (!(pivot >= kSingularPivotRatio))
      throw SingularMatrixError(r, "SparseLu: relative pivot " + fmt_sci(pivot) + " at row " + std::to_string(r) +
                                       " below " + fmt_sci(kSingularPivotRatio));
  }
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

Vector SparseLu::solve(std::span<const double> b) const {
  if (b.size() != static_cast<std::size_t>(n_))
    throw DimensionError("SparseLu::solve: rhs length " + std::to_string(b.size()) + " vs " + std::to_string(n_));
  Vector x(b.size());
  if (n_ == 0) return x;
  Eigen::VectorXd rhs(n_);
  for (Index r = 0; r < n_; ++r) rhs[r] = b[r] * impl_->row_scale[r];
  Eigen::Map<Eigen::VectorXd>(x.data(), n_) = impl_->lu.solve(rhs);
  return x;
}

Vector solve_linear(const CsrMatrix& m, std::span<const double> b) { return SparseLu(m).solve(b); }

}  // namespace nsoc::sparse
