#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace bulletsum {

// Deterministic random source. std::mt19937_64 output is pinned by the
// standard for a given seed; the distribution classes are not, so bounded
// draws and shuffles are derived here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform double in (0, hi].
  double range_open_low(double hi) { return (1.0 - unit()) * hi; }

  // Fisher-Yates; the first k slots of a partial pass are a uniform draw of
  // k distinct elements.
  template <typename T>
  void shuffle_prefix(std::vector<T>& items, std::size_t k) {
    if (items.empty()) return;
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle_prefix(items, items.size());
  }

  // k distinct indices from [0, n), ascending.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  if (k > n) k = n;
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  shuffle_prefix(pool, k);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace bulletsum
