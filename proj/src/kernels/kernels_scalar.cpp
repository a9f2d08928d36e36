#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "netda/kernels.hpp"

// Scalar reference kernels. Reductions keep 4 lane-strided accumulators so
// the AVX2 variants (one 256-bit register = 4 doubles) can match them bit
// for bit; the combine order (acc0+acc2)+(acc1+acc3) mirrors the AVX2
// horizontal reduction. This file is compiled with -fno-tree-vectorize and
// -ffp-contract=off so the reference stays plain IEEE scalar code.

namespace netda::kernels::scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void add(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

void clamp01(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::min(std::max(x[i], 0.0), 1.0);
}

void sir_mask(double* p, const std::uint8_t* infected,
              const std::uint8_t* vaccinated, const std::uint8_t* recovered,
              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::min(std::max(p[i], 0.0), 1.0);
    v *= 1.0 - static_cast<double>(recovered[i]);
    v *= 1.0 - static_cast<double>(vaccinated[i]);
    v *= 1.0 - static_cast<double>(infected[i]);
    p[i] = v;
  }
}

void accumulate_sq_diff(double* acc, const double* x, const double* mean,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean[i];
    acc[i] += d * d;
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc[i & 3] += x[i] * y[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double sum(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc[i & 3] += x[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double weighted_sq_norm(const double* x, const double* w, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc[i & 3] += w[i] * (x[i] * x[i]);
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double max_abs(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    acc[i & 3] = std::max(acc[i & 3], std::abs(x[i]));
  return std::max(std::max(acc[0], acc[2]), std::max(acc[1], acc[3]));
}

extern const Table kTable;
const Table kTable = {
    axpy, scale, add, sub, mul, clamp01, sir_mask, accumulate_sq_diff,
    dot,  sum,   weighted_sq_norm, max_abs,
};

}  // namespace netda::kernels::scalar
