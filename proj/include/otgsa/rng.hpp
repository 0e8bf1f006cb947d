#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace otgsa {

// Philox4x64-10 counter-based generator. Streams are cheap value types:
// a (key, counter) pair fully determines the output, so independent
// substreams can be derived by hashing names instead of sharing state.
class Philox {
 public:
  using Block = std::array<std::uint64_t, 4>;

  Philox() = default;
  Philox(std::uint64_t key_hi, std::uint64_t key_lo) : key_{key_lo, key_hi} {}

  static Block block(std::array<std::uint64_t, 4> counter,
                     std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += 0x9E3779B97F4A7C15ULL;
      key[1] += 0xBB67AE8584CAA73BULL;
    }
    return counter;
  }

  std::uint64_t next_u64() {
    if (index_ == 4) {
      buffer_ = block({counter_[0], counter_[1], 0, 0}, key_);
      if (++counter_[0] == 0) ++counter_[1];
      index_ = 0;
    }
    return buffer_[index_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) without modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

 private:
  static std::array<std::uint64_t, 4> single_round(
      const std::array<std::uint64_t, 4>& ctr,
      const std::array<std::uint64_t, 2>& key) {
    const auto p0 = mul_wide(ctr[0], 0xD2E7470EE14C6C93ULL);
    const auto p1 = mul_wide(ctr[2], 0xCA5A826395121157ULL);
    return {p1.hi ^ ctr[1] ^ key[0], p1.lo, p0.hi ^ ctr[3] ^ key[1], p0.lo};
  }

  struct Wide {
    std::uint64_t hi, lo;
  };
  static Wide mul_wide(std::uint64_t a, std::uint64_t b) {
    const auto p = static_cast<unsigned __int128>(a) * b;
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }

  std::array<std::uint64_t, 2> key_{0, 0};
  std::array<std::uint64_t, 2> counter_{0, 0};
  Block buffer_{};
  int index_ = 4;
};

// FNV-1a, the substream-label hash.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t mix_u64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Substream for (experiment seed, label, index). Distinct labels or indices
// give statistically independent streams under one experiment seed.
inline Philox substream(std::uint64_t seed, std::string_view label,
                        std::uint64_t index = 0) {
  return Philox{mix_u64(seed ^ hash_label(label)),
                mix_u64(seed + 0x9E3779B97F4A7C15ULL * (index + 1))};
}

}  // namespace otgsa
