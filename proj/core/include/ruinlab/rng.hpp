#pragma once

#include <array>
#include <cstdint>

namespace ruinlab {

// Identifies one reproducible random stream: the experiment seed plus one id
// per Monte Carlo path (or worker).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

// SplitMix64 output function. Used both to derive stream state and as a
// general 64-bit hash.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Advances a SplitMix64 state and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

// xoshiro256** stream.
//
// State derivation for a key (seed, id):
//   sm = seed ^ mix64(id + 0x9E3779B97F4A7C15)
//   s[0..3] = four successive splitmix64_next(sm) outputs
//
// Uniforms use the top 53 bits: u = ((x >> 11) + 0.5) * 2^-53, which lies
// strictly inside (0, 1). Gaussians use Box-Muller on two consecutive
// uniforms (u1 for the radius, u2 for the angle); the cosine branch is
// returned first and the sine branch is cached for the next call.
class Stream {
 public:
  explicit Stream(StreamKey key) noexcept;

  std::uint64_t next_u64() noexcept;
  double next_uniform() noexcept;
  double next_gaussian() noexcept;
  double next_exponential() noexcept;

  const StreamKey& key() const noexcept { return key_; }

 private:
  StreamKey key_;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ruinlab
