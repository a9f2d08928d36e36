#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace netda::kernels {

// Data-parallel arithmetic core. Every kernel has a scalar reference
// implementation and an AVX2 variant; the backend is selected once at
// runtime (CPU detection, overridable via NETDA_SIMD=scalar|avx2 or
// force_backend). The two backends are bit-exact by contract:
//   - element-wise kernels apply the identical IEEE operation per element;
//   - reductions accumulate into 4 lane-strided partials (lane = i mod 4)
//     and combine them as (acc0+acc2) + (acc1+acc3).
// Equivalence is enforced by tests/test_kernels.cpp, so results never
// depend on which backend ran.

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_backend(Backend b);  // throws config_error if unsupported
bool cpu_supports_avx2();
std::string backend_name(Backend b);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// x *= a
void scale(std::span<double> x, double a);
// y += x
void add(std::span<double> y, std::span<const double> x);
// out = a - b
void sub(std::span<double> out, std::span<const double> a,
         std::span<const double> b);
// y *= x (element-wise)
void mul(std::span<double> y, std::span<const double> x);
// x = min(max(x, 0), 1)
void clamp01(std::span<double> x);
// p[i] = clamp01(p[i]) * (1-rec[i]) * (1-vac[i]) * (1-inf[i]); flags are 0/1
void sir_mask(std::span<double> p, const std::uint8_t* infected,
              const std::uint8_t* vaccinated, const std::uint8_t* recovered);
// acc[i] += (x[i] - mean[i])^2
void accumulate_sq_diff(std::span<double> acc, std::span<const double> x,
                        std::span<const double> mean);

double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
// sum_i w[i] * x[i]^2
double weighted_sq_norm(std::span<const double> x, std::span<const double> w);
double max_abs(std::span<const double> x);

// Raw per-backend tables, exposed for the equivalence tests.
struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, double, std::size_t);
  void (*add)(double*, const double*, std::size_t);
  void (*sub)(double*, const double*, const double*, std::size_t);
  void (*mul)(double*, const double*, std::size_t);
  void (*clamp01)(double*, std::size_t);
  void (*sir_mask)(double*, const std::uint8_t*, const std::uint8_t*,
                   const std::uint8_t*, std::size_t);
  void (*accumulate_sq_diff)(double*, const double*, const double*,
                             std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*weighted_sq_norm)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

const Table& table(Backend b);

}  // namespace netda::kernels
