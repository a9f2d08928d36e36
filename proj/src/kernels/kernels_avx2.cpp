#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <immintrin.h>

#include "netda/kernels.hpp"

// AVX2 kernels. No FMA intrinsics and -ffp-contract=off: every lane performs
// the same IEEE mul/add sequence as the scalar reference, so the two
// backends agree bitwise. Reductions spill the 4-lane register into the
// scalar accumulator array for the tail, which keeps the lane-strided
// contract (lane = i mod 4) intact for any length.

namespace netda::kernels::avx2 {

namespace {

inline __m256d flags_to_keep_mask(const std::uint8_t* f, std::size_t i) {
  // 1.0 - flag for 4 consecutive nodes; flags are 0/1 bytes.
  std::uint32_t packed;
  std::memcpy(&packed, f + i, 4);
  const __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(packed));
  const __m256d v = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(bytes));
  return _mm256_sub_pd(_mm256_set1_pd(1.0), v);
}

inline double combine(const double acc[4]) {
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  for (; i < n; ++i) x[i] *= a;
}

void add(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] += x[i];
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] *= x[i];
}

void clamp01(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_min_pd(_mm256_max_pd(v, zero), one);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) x[i] = std::min(std::max(x[i], 0.0), 1.0);
}

void sir_mask(double* p, const std::uint8_t* infected,
              const std::uint8_t* vaccinated, const std::uint8_t* recovered,
              std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(p + i);
    v = _mm256_min_pd(_mm256_max_pd(v, zero), one);
    v = _mm256_mul_pd(v, flags_to_keep_mask(recovered, i));
    v = _mm256_mul_pd(v, flags_to_keep_mask(vaccinated, i));
    v = _mm256_mul_pd(v, flags_to_keep_mask(infected, i));
    _mm256_storeu_pd(p + i, v);
  }
  for (; i < n; ++i) {
    double v = std::min(std::max(p[i], 0.0), 1.0);
    v *= 1.0 - static_cast<double>(recovered[i]);
    v *= 1.0 - static_cast<double>(vaccinated[i]);
    v *= 1.0 - static_cast<double>(infected[i]);
    p[i] = v;
  }
}

void accumulate_sq_diff(double* acc, const double* x, const double* mean,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i),
                                    _mm256_loadu_pd(mean + i));
    const __m256d sq = _mm256_mul_pd(d, d);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), sq));
  }
  for (; i < n; ++i) {
    const double d = x[i] - mean[i];
    acc[i] += d * d;
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vacc = _mm256_add_pd(
        vacc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < n; ++i) acc[i & 3] += x[i] * y[i];
  return combine(acc);
}

double sum(const double* x, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < n; ++i) acc[i & 3] += x[i];
  return combine(acc);
}

double weighted_sq_norm(const double* x, const double* w, std::size_t n) {
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d sq = _mm256_mul_pd(xi, xi);
    vacc = _mm256_add_pd(vacc, _mm256_mul_pd(_mm256_loadu_pd(w + i), sq));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < n; ++i) acc[i & 3] += w[i] * (x[i] * x[i]);
  return combine(acc);
}

double max_abs(const double* x, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d vacc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vacc = _mm256_max_pd(vacc,
                         _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
  alignas(32) double acc[4];
  _mm256_store_pd(acc, vacc);
  for (; i < n; ++i) acc[i & 3] = std::max(acc[i & 3], std::abs(x[i]));
  return std::max(std::max(acc[0], acc[2]), std::max(acc[1], acc[3]));
}

extern const Table kTable;
const Table kTable = {
    axpy, scale, add, sub, mul, clamp01, sir_mask, accumulate_sq_diff,
    dot,  sum,   weighted_sq_norm, max_abs,
};

}  // namespace netda::kernels::avx2
