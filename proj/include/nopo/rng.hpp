#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace nopo {

/// Counter-based random number generator (Philox4x32-10).
///
/// A stream is identified by (seed, stream): the 64-bit seed is the cipher
/// key and the stream id occupies the upper counter words. Streams with the
/// same seed but different ids are statistically independent, which is what
/// makes ensemble runs reproducible regardless of the number of worker
/// threads: trajectory i always consumes stream i and nothing else.
class PhiloxRng {
 public:
  explicit PhiloxRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint64_t next_u64() {
    if (buffer_pos_ >= 4) refill();
    const std::uint64_t lo = buffer_[buffer_pos_];
    const std::uint64_t hi = buffer_[buffer_pos_ + 1];
    buffer_pos_ += 2;
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_open_double() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_uniform(double a, double b) {
    return a + (b - a) * next_double();
  }

  /// Standard normal deviate (Marsaglia polar method, pair-cached).
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  /// One raw 10-round block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
      const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

 private:
  void refill() {
    buffer_ = block(counter_, key_);
    // 2^32 blocks per stream before wrap; far beyond any run here.
    ++counter_[0];
    if (counter_[0] == 0) ++counter_[1];
    buffer_pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace nopo
