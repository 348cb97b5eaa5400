#pragma once

#include <cstdint>

namespace prioritizer {

// Counter-based randomness for dropout masks. These definitions are frozen:
// changing any constant changes every stochastic score ever produced.
//
//   splitmix64(x):  z = x + 0x9E3779B97F4A7C15
//                   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                   return z ^ (z >> 31)
//
//   mask_stream_seed(seed, input, sample, layer):
//     h = splitmix64(seed)
//     h = splitmix64(h ^ input)
//     h = splitmix64(h ^ sample)
//     h = splitmix64(h ^ layer)
//
// A mask stream is a SplitMix64 sequence started at that seed; each draw
// yields a double uniform in [0, 1) from its top 53 bits.

std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t mask_stream_seed(std::uint64_t global_seed, std::uint64_t input_index, std::uint64_t sample_index,
                               std::uint64_t layer_ordinal) noexcept;

class MaskStream {
 public:
  explicit MaskStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform double in [0, 1).
  double next_unit() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace prioritizer
