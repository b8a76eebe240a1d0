#pragma once

#include "nsoc/sparse/csr_matrix.hpp"

#include <memory>
#include <span>

namespace nsoc::sparse {

// A pivot smaller than this times the largest absolute entry of the original
// row it eliminates is reported as singular.
inline constexpr double kSingularPivotRatio = 1e-14;

// Sparse LU factorization with partial pivoting and a COLAMD fill-reducing
// column ordering. Factorization happens in the constructor and throws
// SingularMatrixError naming the offending row. Deterministic for identical
// input.
class SparseLu {
 public:
  explicit SparseLu(const CsrMatrix& m);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  Index size() const noexcept { return n_; }
  Vector solve(std::span<const double> b) const;

  // Smallest |U_jj| of the row-equilibrated factorization.
  double min_pivot() const noexcept { return min_pivot_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
  double min_pivot_ = 0.0;
};

// One-shot factor-and-solve.
Vector solve_linear(const CsrMatrix& m, std::span<const double> b);

}  // namespace nsoc::sparse
