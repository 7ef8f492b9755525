#pragma once

#include <array>
#include <cstdint>

namespace solpath {

// Seedable stream generator. A stream is identified by (master seed, stream
// index); the sequence for a given pair is fixed across runs and platforms.
// xoshiro256** core, state expanded from the pair with splitmix64.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

  // Derived stream keyed by this stream's identity and `k`; does not consume
  // from this stream.
  RngStream substream(std::uint64_t k) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace solpath
