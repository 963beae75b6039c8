#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace kinex {

__extension__ using uint128_t = unsigned __int128;

/// SplitMix64 output function. Used for seeding and for deriving per-run
/// stream seeds; never as the simulation stream itself.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed of run `replicate` at grid point `point` under `master`. A pure
/// function of its arguments, so sweeps are independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                          std::uint64_t replicate) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna), state expanded from a 64-bit seed
/// with SplitMix64. Output is identical on every platform.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Uniform double on [0, 1) from the top 53 bits of one draw.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Integer on [0, bound) by 128-bit multiply-shift. Always exactly one
  /// draw; the bias is below bound / 2^64.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<uint128_t>((*this)()) * bound) >> 64);
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

inline constexpr const char* kRngName = "xoshiro256** (SplitMix64 seeding)";

}  // namespace kinex
