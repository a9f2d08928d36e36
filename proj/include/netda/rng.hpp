#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace netda {

// Reproducibility scheme: one root seed, and every random decision in the
// pipeline draws from a substream keyed by (root, purpose tag, indices...).
// Keys are hashed with splitmix64 so substreams are independent of each
// other and of evaluation order; this is what makes common-random-number
// comparisons and parallel Monte Carlo workers byte-reproducible.

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a over a string literal, for readable purpose tags.
constexpr std::uint64_t tag(const char* s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (; *s; ++s) h = (h ^ static_cast<std::uint64_t>(*s)) * 0x100000001b3ULL;
  return h;
}

constexpr std::uint64_t mix_key(std::uint64_t acc) { return splitmix64(acc); }

template <class... Rest>
constexpr std::uint64_t mix_key(std::uint64_t acc, std::uint64_t head,
                                Rest... rest) {
  return mix_key(splitmix64(acc ^ splitmix64(head + 0x9e3779b97f4a7c15ULL)),
                 rest...);
}

// Stateless draws for per-node randomness (counter-based). Used where the
// same value must be reproducible no matter when or where it is drawn.
inline double hash_uniform01(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

inline std::uint64_t hash_bounded(std::uint64_t key, std::uint64_t n) {
  // Lemire's unbiased bounded mapping; rejection re-mixes the key.
  std::uint64_t x = splitmix64(key);
  for (;;) {
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    x = splitmix64(x);
  }
}

// Stateful stream. mt19937_64's sequence is fixed by the standard, and the
// uniform mappings below are hand-rolled, so draws are identical across
// platforms and toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Inclusive [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    auto n = static_cast<std::uint64_t>(hi - lo) + 1;
    if (n == 0) return static_cast<std::int64_t>(next());  // full range
    std::uint64_t x = next();
    for (;;) {
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      auto l = static_cast<std::uint64_t>(m);
      if (l >= n || l >= (-n) % n)
        return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(m >> 64));
      x = next();
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(
          uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Distinct sample of k indices from [0, n), order not meaningful.
  std::vector<std::int32_t> sample_without_replacement(std::int32_t n,
                                                       std::int32_t k);

 private:
  std::mt19937_64 eng_;
};

inline std::vector<std::int32_t> Rng::sample_without_replacement(
    std::int32_t n, std::int32_t k) {
  std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  if (k > n) k = n;
  // Partial Fisher-Yates: first k entries are the sample.
  for (std::int32_t i = 0; i < k; ++i) {
    auto j = static_cast<std::size_t>(uniform_int(i, n - 1));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

template <class... Ids>
Rng make_stream(std::uint64_t root, std::uint64_t purpose, Ids... ids) {
  return Rng(mix_key(root, purpose, static_cast<std::uint64_t>(ids)...));
}

}  // namespace netda
