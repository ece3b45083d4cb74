#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace msrss {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A stream is fully determined by a 64-bit key and a 64-bit stream index;
/// the remaining 64 counter bits enumerate output blocks within the stream.
/// Each block yields four 32-bit words, handed out as two 64-bit values so
/// that std::generate_canonical<double> consumes a single call.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32() : Philox4x32(0, 0) {}
  Philox4x32(std::uint64_t key, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  result_type operator()() {
    if (pos_ == 2) {
      buffer_ = Bijection(CounterFor(block_++), key_);
      pos_ = 0;
    }
    const auto lo = buffer_[2 * pos_];
    const auto hi = buffer_[2 * pos_ + 1];
    ++pos_;
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  void discard(unsigned long long z) {
    while (z > 0 && pos_ != 2) {
      (*this)();
      --z;
    }
    block_ += z / 2;
    if (z % 2) (*this)();
  }

  /// The keyed bijection over 128-bit counters, ten rounds.
  static Block Bijection(Block ctr, Key key) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
#if defined(__GNUC__)
#pragma GCC unroll 10
#endif
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      c0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
      c1 = static_cast<std::uint32_t>(p1);
      c2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
      c3 = static_cast<std::uint32_t>(p0);
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  Block CounterFor(std::uint64_t block) const {
    return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int pos_ = 2;
};

using Rng = Philox4x32;

/// Uniform double on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to turn configuration descriptions into stable ids.
inline constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Stream for replication `replication` of the grid point identified by
/// `point_id` under the user seed. Independent of scheduling.
inline Rng replication_stream(std::uint64_t seed, std::uint64_t point_id,
                              std::uint64_t replication) {
  return Rng(splitmix64(seed ^ splitmix64(point_id)), replication);
}

}  // namespace msrss
