#pragma once

#include "nsoc/simd/kernels.hpp"

#include <cstddef>

namespace nsoc::simd {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
void max0(const double* x, double* out, std::size_t n);
void prox(double gamma, const double* x, double* out, std::size_t n);
void spmv_csr(Index n_rows, const Index* row_offsets, const Index* col_indices,
              const double* values, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
void max0(const double* x, double* out, std::size_t n);
void prox(double gamma, const double* x, double* out, std::size_t n);
void spmv_csr(Index n_rows, const Index* row_offsets, const Index* col_indices,
              const double* values, const double* x, double* y);
}  // namespace avx2

}  // namespace nsoc::simd
