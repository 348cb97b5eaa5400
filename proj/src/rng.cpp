#include "prioritizer/rng.hpp"

namespace prioritizer {
namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mask_stream_seed(std::uint64_t global_seed, std::uint64_t input_index, std::uint64_t sample_index,
                               std::uint64_t layer_ordinal) noexcept {
  std::uint64_t h = splitmix64(global_seed);
  h = splitmix64(h ^ input_index);
  h = splitmix64(h ^ sample_index);
  return splitmix64(h ^ layer_ordinal);
}

std::uint64_t MaskStream::next_u64() noexcept {
  state_ += kGolden;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double MaskStream::next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace prioritizer
