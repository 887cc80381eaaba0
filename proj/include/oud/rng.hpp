#pragma once

#include <array>
#include <cstdint>

namespace oud {

// Counter-based generator (philox4x64-10). A stream is identified by
// (seed, stream id); advancing never mutates shared state, so any number
// of streams can be drawn from concurrently and a draw at a given position
// is the same no matter what was drawn before it on other streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();  // (0, 1]
  double next_normal();   // standard normal, Box-Muller

  // One keyed block of the underlying permutation; exposed for tests
  // against published test vectors.
  static std::array<std::uint64_t, 4> block(
      const std::array<std::uint64_t, 4>& counter,
      const std::array<std::uint64_t, 2>& key);

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{};
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
  double pending_normal_ = 0.0;
  bool has_pending_normal_ = false;
};

// Stream-id layout: purpose tag in the top byte keeps every consumer of a
// seed on a disjoint set of streams.
namespace streams {

constexpr std::uint64_t tag(std::uint64_t purpose, std::uint64_t index) {
  return (purpose << 56) | (index & 0x00FF'FFFF'FFFF'FFFFULL);
}

constexpr std::uint64_t weight_init(std::uint64_t layer) { return tag(1, layer); }
constexpr std::uint64_t shuffle(std::uint64_t epoch) { return tag(2, epoch); }
constexpr std::uint64_t training_example(std::uint64_t epoch, std::uint64_t index) {
  return tag(3, (epoch << 36) | (index & 0xF'FFFF'FFFFULL));
}
constexpr std::uint64_t trajectory(std::uint64_t index) { return tag(4, index); }
constexpr std::uint64_t sample(std::uint64_t index) { return tag(5, index); }
constexpr std::uint64_t split(std::uint64_t index) { return tag(6, index); }
constexpr std::uint64_t resample(std::uint64_t index) { return tag(7, index); }
constexpr std::uint64_t oracle(std::uint64_t index) { return tag(8, index); }

}  // namespace streams

}  // namespace oud
