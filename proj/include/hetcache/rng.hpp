#pragma once
// Counter-based substreams: every (seed, replicate, stream) triple maps to an
// independent generator state, so parallel replicate schedules cannot change
// the draws.

#include <cstdint>

namespace hetcache {

// splitmix64; satisfies UniformRandomBitGenerator for the <random> adaptors.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffffffffffull; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never 0, safe under log().
  double uniform01() {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t replicate,
                            std::uint64_t stream) {
  SplitMix64 a(seed ^ (0x9e3779b97f4a7c15ull * (replicate + 1)));
  const std::uint64_t mixed = a();
  SplitMix64 b(mixed ^ (0xd1b54a32d192ed03ull * (stream + 1)));
  return SplitMix64(b());
}

}  // namespace hetcache
