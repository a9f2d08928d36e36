#include <atomic>
#include <cstdlib>
#include <string>

#include "netda/errors.hpp"
#include "netda/kernels.hpp"

namespace netda::kernels {

namespace scalar {
extern const Table kTable;
}
namespace avx2 {
extern const Table kTable;
}

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

Backend detect_backend() {
  if (const char* env = std::getenv("NETDA_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!cpu_supports_avx2())
        throw config_error("NETDA_SIMD=avx2 but CPU lacks AVX2");
      return Backend::avx2;
    }
    if (!v.empty())
      throw config_error("NETDA_SIMD must be 'scalar' or 'avx2', got '" + v +
                         "'");
  }
  return cpu_supports_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Table*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Table* init_once() {
  const Backend b = detect_backend();
  g_backend.store(b, std::memory_order_relaxed);
  const Table* t = &table(b);
  g_table.store(t, std::memory_order_release);
  return t;
}

inline const Table& active() {
  const Table* t = g_table.load(std::memory_order_acquire);
  return t ? *t : *init_once();
}

}  // namespace

const Table& table(Backend b) {
  return b == Backend::avx2 ? avx2::kTable : scalar::kTable;
}

Backend active_backend() {
  active();
  return g_backend.load(std::memory_order_relaxed);
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_supports_avx2())
    throw config_error("cannot force AVX2 backend: CPU lacks AVX2");
  g_backend.store(b, std::memory_order_relaxed);
  g_table.store(&table(b), std::memory_order_release);
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
void scale(std::span<double> x, double a) {
  active().scale(x.data(), a, x.size());
}
void add(std::span<double> y, std::span<const double> x) {
  active().add(y.data(), x.data(), x.size());
}
void sub(std::span<double> out, std::span<const double> a,
         std::span<const double> b) {
  active().sub(out.data(), a.data(), b.data(), out.size());
}
void mul(std::span<double> y, std::span<const double> x) {
  active().mul(y.data(), x.data(), x.size());
}
void clamp01(std::span<double> x) { active().clamp01(x.data(), x.size()); }
void sir_mask(std::span<double> p, const std::uint8_t* infected,
              const std::uint8_t* vaccinated, const std::uint8_t* recovered) {
  active().sir_mask(p.data(), infected, vaccinated, recovered, p.size());
}
void accumulate_sq_diff(std::span<double> acc, std::span<const double> x,
                        std::span<const double> mean) {
  active().accumulate_sq_diff(acc.data(), x.data(), mean.data(), acc.size());
}
double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}
double weighted_sq_norm(std::span<const double> x,
                        std::span<const double> w) {
  return active().weighted_sq_norm(x.data(), w.data(), x.size());
}
double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}

}  // namespace netda::kernels
