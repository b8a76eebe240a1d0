#pragma once

// Data-parallel inner loops used by the sparse and finite-element layers.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is chosen once at runtime from CPUID; the
// environment variable NSOC_SIMD=scalar forces the reference path.
// Elementwise kernels are bit-identical across variants. Reductions (dot,
// spmv rows) may differ in the last bits because the AVX2 path sums in four
// lanes with fused multiply-add.

#include <cstdint>
#include <span>
#include <string_view>

namespace nsoc::simd {

using Index = std::int32_t;

struct KernelTable {
  std::string_view name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = a .* b
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
  // out = max(0, x)
  void (*max0)(const double* x, double* out, std::size_t n);
  // out = prox_gamma(x) of the max function
  void (*prox)(double gamma, const double* x, double* out, std::size_t n);
  // y = A x for a CSR matrix with n_rows rows
  void (*spmv_csr)(Index n_rows, const Index* row_offsets, const Index* col_indices,
                   const double* values, const double* x, double* y);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// Table selected at first use.
const KernelTable& active();

// Convenience wrappers over active().
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out);
void max0(std::span<const double> x, std::span<double> out);
void prox(double gamma, std::span<const double> x, std::span<double> out);

}  // namespace nsoc::simd
