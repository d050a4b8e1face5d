#pragma once

#include <cstdint>
#include <random>

namespace sphx {

// mt19937_64 is pinned by the standard; the open-interval double conversion is
// done by hand because uniform_real_distribution is implementation-defined and
// would break bit-reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t value;
    do {
      value = gen_();
    } while (value >= limit);
    return value % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sphx
