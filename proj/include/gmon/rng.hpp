#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace gmon {

// SplitMix64 finalizer. Used only to expand and decorrelate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combines a seed with a tag into a new, well-mixed seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  std::uint64_t state = seed ^ (tag * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

// xoshiro256++ (Blackman & Vigna). Small state, so one engine per
// (replication, stream) pair is affordable even for m = 1000 streams.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256pp(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  friend constexpr bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

using Rng = Xoshiro256pp;

// Reserved stream ids for substreams that are not tied to a data stream.
inline constexpr std::uint64_t kPoolStream = 0xfffffffffffff001ULL;
inline constexpr std::uint64_t kScenarioStream = 0xfffffffffffff002ULL;

// Independent substream for (replication, stream) under a master seed.
// Substreams never share state, so they can be consumed from any thread in
// any order without changing each other's output.
constexpr Rng substream(std::uint64_t seed, std::uint64_t replication,
                        std::uint64_t stream) noexcept {
  return Rng(mix_seed(mix_seed(seed, replication + 1), stream + 1));
}

}  // namespace gmon
