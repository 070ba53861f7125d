#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace aggrlim {

// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

// Identifies one independent random stream. Streams with distinct
// (replicate, copy) under the same seed never overlap: the replicate is
// folded into the Philox key through a bijection and the copy occupies the
// upper half of the 128-bit counter.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t copy = 0;
};

// Counter-based random stream. Cheap to construct, so every (replicate, copy)
// pair gets its own; results never depend on scheduling.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(StreamId id) noexcept;
  RngStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t copy) noexcept
      : RngStream(StreamId{seed, replicate, copy}) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    if (used_ >= 4) refill();
    const std::uint64_t lo = buffer_[used_];
    const std::uint64_t hi = buffer_[used_ + 1];
    used_ += 2;
    return (hi << 32) | lo;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe to pass to log.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal draw (Marsaglia polar method, second variate cached).
  double normal() noexcept;

  // Number of 128-bit blocks consumed so far.
  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  void refill() noexcept;

  Philox4x32::Key key_{};
  std::uint64_t copy_ = 0;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  unsigned used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aggrlim
