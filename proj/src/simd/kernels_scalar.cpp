#include "kernels_impl.hpp"

namespace nsoc::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void max0(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void prox(double gamma, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    out[i] = v < 0.0 ? v : (v <= gamma ? 0.0 : v - gamma);
  }
}

void spmv_csr(Index n_rows, const Index* row_offsets, const Index* col_indices,
              const double* values, const double* x, double* y) {
  for (Index r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (Index k = row_offsets[r]; k < row_offsets[r + 1]; ++k) s += values[k] * x[col_indices[k]];
    y[r] = s;
  }
}

}  // namespace nsoc::simd::scalar
