#include <doctest.h>

#include <cstring>
#include <vector>

#include "netda/kernels.hpp"
#include "netda/rng.hpp"

using namespace netda;
using kernels::Backend;

namespace {

std::vector<double> random_data(std::size_t n, Rng& rng, double lo = -10.0,
                                double hi = 10.0) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

std::vector<std::uint8_t> random_flags(std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> f(n);
  for (auto& x : f) x = rng.uniform01() < 0.3 ? 1 : 0;
  return f;
}

bool bitwise_equal(const std::vector<double>& a,
                   const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("kernel semantics (active backend)") {
  std::vector<double> y = {1.0, 2.0, 3.0};
  kernels::axpy(2.0, std::vector<double>{1.0, -1.0, 0.5}, y);
  CHECK(y == std::vector<double>{3.0, 0.0, 4.0});

  std::vector<double> x = {-0.5, 0.5, 1.5};
  kernels::clamp01(x);
  CHECK(x == std::vector<double>{0.0, 0.5, 1.0});

  CHECK(kernels::dot(std::vector<double>{1, 2, 3},
                     std::vector<double>{4, 5, 6}) == doctest::Approx(32.0));
  CHECK(kernels::sum(std::vector<double>{1, 2, 3, 4, 5}) ==
        doctest::Approx(15.0));
  CHECK(kernels::max_abs(std::vector<double>{-7, 2, 3}) == 7.0);
  CHECK(kernels::max_abs(std::vector<double>{}) == 0.0);
  CHECK(kernels::weighted_sq_norm(std::vector<double>{2, 3},
                                  std::vector<double>{1, 2}) ==
        doctest::Approx(4.0 + 18.0));
}

TEST_CASE("sir_mask clamps and masks") {
  std::vector<double> p = {1.7, 0.5, 0.5, 0.5, -0.25};
  const std::uint8_t inf[] = {0, 1, 0, 0, 0};
  const std::uint8_t vac[] = {0, 0, 1, 0, 0};
  const std::uint8_t rec[] = {0, 0, 0, 1, 0};
  kernels::sir_mask(p, inf, vac, rec);
  CHECK(p == std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("scalar and AVX2 backends are bit-exact") {
  if (!kernels::cpu_supports_avx2()) {
    MESSAGE("CPU lacks AVX2; equivalence test skipped");
    return;
  }
  const auto& s = kernels::table(Backend::scalar);
  const auto& v = kernels::table(Backend::avx2);
  Rng rng(20240601);

  // Lengths straddling the 4-lane boundary plus larger odd sizes.
  for (std::size_t n :
       {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
        std::size_t{4}, std::size_t{5}, std::size_t{7}, std::size_t{8},
        std::size_t{63}, std::size_t{64}, std::size_t{65}, std::size_t{1001}}) {
    for (int rep = 0; rep < 8; ++rep) {
      const auto a = random_data(n, rng);
      const auto b = random_data(n, rng);
      const auto flags1 = random_flags(n, rng);
      const auto flags2 = random_flags(n, rng);
      const auto flags3 = random_flags(n, rng);
      const double alpha = rng.uniform01() * 4.0 - 2.0;

      auto y1 = a, y2 = a;
      s.axpy(alpha, b.data(), y1.data(), n);
      v.axpy(alpha, b.data(), y2.data(), n);
      CHECK(bitwise_equal(y1, y2));

      y1 = a;
      y2 = a;
      s.scale(y1.data(), alpha, n);
      v.scale(y2.data(), alpha, n);
      CHECK(bitwise_equal(y1, y2));

      y1 = a;
      y2 = a;
      s.add(y1.data(), b.data(), n);
      v.add(y2.data(), b.data(), n);
      CHECK(bitwise_equal(y1, y2));

      std::vector<double> o1(n), o2(n);
      s.sub(o1.data(), a.data(), b.data(), n);
      v.sub(o2.data(), a.data(), b.data(), n);
      CHECK(bitwise_equal(o1, o2));

      y1 = a;
      y2 = a;
      s.mul(y1.data(), b.data(), n);
      v.mul(y2.data(), b.data(), n);
      CHECK(bitwise_equal(y1, y2));

      y1 = a;
      y2 = a;
      s.clamp01(y1.data(), n);
      v.clamp01(y2.data(), n);
      CHECK(bitwise_equal(y1, y2));

      y1 = a;
      y2 = a;
      s.sir_mask(y1.data(), flags1.data(), flags2.data(), flags3.data(), n);
      v.sir_mask(y2.data(), flags1.data(), flags2.data(), flags3.data(), n);
      CHECK(bitwise_equal(y1, y2));

      y1 = a;
      y2 = a;
      s.accumulate_sq_diff(y1.data(), b.data(), a.data(), n);
      v.accumulate_sq_diff(y2.data(), b.data(), a.data(), n);
      CHECK(bitwise_equal(y1, y2));

      CHECK(s.dot(a.data(), b.data(), n) == v.dot(a.data(), b.data(), n));
      CHECK(s.sum(a.data(), n) == v.sum(a.data(), n));
      CHECK(s.weighted_sq_norm(a.data(), b.data(), n) ==
            v.weighted_sq_norm(a.data(), b.data(), n));
      CHECK(s.max_abs(a.data(), n) == v.max_abs(a.data(), n));
    }
  }
}

TEST_CASE("backend forcing") {
  const Backend original = kernels::active_backend();
  kernels::force_backend(Backend::scalar);
  CHECK(kernels::active_backend() == Backend::scalar);
  CHECK(kernels::backend_name(kernels::active_backend()) == "scalar");
  kernels::force_backend(original);
}
