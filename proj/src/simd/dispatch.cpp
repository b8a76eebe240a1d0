#include "kernels_impl.hpp"
#include "nsoc/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nsoc::simd {

namespace {

void check_same(std::size_t a, std::size_t b) {
  if (a != b)
    throw DimensionError("simd: length mismatch " + std::to_string(a) + " vs " + std::to_string(b));
}

const KernelTable* select() {
  if (const char* env = std::getenv("NSOC_SIMD"); env && std::string(env) == "scalar")
    return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",      scalar::dot,  scalar::axpy,    scalar::hadamard,
                                 scalar::max0,  scalar::prox, scalar::spmv_csr};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(NSOC_HAVE_AVX2_TU)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2",      avx2::dot,  avx2::axpy,    avx2::hadamard,
                                 avx2::max0,  avx2::prox, avx2::spmv_csr};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* table = select();
  return *table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  check_same(a.size(), b.size());
  check_same(a.size(), out.size());
  active().hadamard(a.data(), b.data(), out.data(), a.size());
}

void max0(std::span<const double> x, std::span<double> out) {
  check_same(x.size(), out.size());
  active().max0(x.data(), out.data(), x.size());
}

void prox(double gamma, std::span<const double> x, std::span<double> out) {
  check_same(x.size(), out.size());
  active().prox(gamma, x.data(), out.data(), x.size());
}

}  // namespace nsoc::simd
