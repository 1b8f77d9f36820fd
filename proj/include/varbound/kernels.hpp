#pragma once

// Dense vector kernels used by every inner loop in the library.
//
// Each kernel exists as a portable scalar reference and, on x86-64, as an
// AVX2 variant. The variant is picked once per process from the CPU's
// reported features; setting VARBOUND_SIMD=scalar in the environment forces
// the reference path. Elementwise kernels are bit-identical across variants.
// Reductions (dot, norms) may differ in the last bits because the AVX2 path
// accumulates in four lanes.

#include <cstddef>
#include <span>
#include <string_view>

namespace varbound::kernels {

enum class Backend { kScalar, kAvx2 };

struct Table {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // y <- y + alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out <- a - b
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  // out <- alpha * a
  void (*scale)(double alpha, const double* a, double* out, std::size_t n);
  // out <- m * x for a row-major rows x cols matrix
  void (*matvec)(const double* m, const double* x, double* out,
                 std::size_t rows, std::size_t cols);
};

const Table& scalar_table();

// Null when the build or the running CPU lacks AVX2.
const Table* avx2_table();

// The table selected for this process.
const Table& active();

std::string_view backend_name(Backend b);

// Convenience wrappers over active().
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_norm(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}
inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline double max_abs(std::span<const double> a) {
  return active().max_abs(a.data(), a.size());
}
inline double sum(std::span<const double> a) {
  return active().sum(a.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void sub(std::span<const double> a, std::span<const double> b,
                std::span<double> out) {
  active().sub(a.data(), b.data(), out.data(), a.size());
}
inline void scale(double alpha, std::span<const double> a,
                  std::span<double> out) {
  active().scale(alpha, a.data(), out.data(), a.size());
}
inline void matvec(std::span<const double> m, std::span<const double> x,
                   std::span<double> out) {
  active().matvec(m.data(), x.data(), out.data(), out.size(), x.size());
}

}  // namespace varbound::kernels
