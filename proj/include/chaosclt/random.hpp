#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace chaosclt {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 random
// bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Counter-based stream of uniforms and standard normals.
//
// The key is the seed; the upper half of the counter is the substream id and
// the lower half counts blocks. Substreams never overlap, so replica r can be
// generated on any thread in any order and always yields the same values.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t substream);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal by the Marsaglia polar method; both variates of a pair
  // are used. Each attempt consumes one fresh block.
  double normal();
  void fill_normal(std::span<double> out);

 private:
  std::array<std::uint32_t, 4> next_block();
  void refill();
  void normal_pair(double& first, double& second);

  std::array<std::uint32_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Mixes a seed with a tag into a new 64-bit seed (splitmix64 finalizer).
// Used to give each grid point of an experiment an independent key.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace chaosclt
