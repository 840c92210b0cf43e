#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace aec {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Deterministic random stream: xoshiro256** seeded through splitmix64.
/// Every draw is a pure function of the seed, independent of platform and
/// standard-library version, so runs are replayable bit for bit.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection of the
  /// top partial block of the 64-bit range.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  /// Sub-seed for independent trial `index` of a Monte-Carlo run: the
  /// splitmix64 mix of master ^ (index+1)*phi. Documented so that external
  /// tools can reproduce per-trial streams.
  static std::uint64_t subseed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ ((index + 1) * 0x9E3779B97F4A7C15ull);
    return detail::splitmix64_next(s);
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace aec
