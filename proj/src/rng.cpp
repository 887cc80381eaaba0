#include "oud/rng.hpp"

#include <cmath>
#include <numbers>

namespace oud {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  return static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> RngStream::block(
    const std::array<std::uint64_t, 4>& counter,
    const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> x = counter;
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, x[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, x[2], hi1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
  }
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : key_{seed, stream} {}

void RngStream::refill() {
  buffer_ = block(counter_, key_);
  buffer_pos_ = 0;
  // 256-bit counter increment
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
}

std::uint64_t RngStream::next_u64() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

double RngStream::next_uniform() {
  // Top 53 bits, mapped to (0, 1] so log() below is always finite.
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
}

double RngStream::next_normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  pending_normal_ = r * std::sin(a);
  has_pending_normal_ = true;
  return r * std::cos(a);
}

}  // namespace oud
