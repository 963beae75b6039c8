#include "kinex/rng.hpp"

#include "kinex/error.hpp"

namespace kinex {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ZeroTotalWealth: return "ZeroTotalWealth";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NonpositiveX: return "NonpositiveX";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                          std::uint64_t replicate) noexcept {
  std::uint64_t h = master;
  std::uint64_t a = splitmix64(h);
  h = a ^ point;
  std::uint64_t b = splitmix64(h);
  h = b ^ replicate;
  return splitmix64(h);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

}  // namespace kinex
