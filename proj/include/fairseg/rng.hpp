#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fairseg {

// SplitMix64 generator. Chosen because it is trivially portable: the entire
// state is one uint64 and every draw is integer arithmetic, so identical
// seeds give identical streams on every platform and compiler.
//
// Stream splitting: substream(seed, k) derives an independent stream for
// index k by running the SplitMix64 finalizer over (seed, k). Regenerating
// stream k never depends on how many other streams exist, which is what
// lets samples be generated in any order (or in parallel) reproducibly.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // SplitMix64 output finalizer.
  static constexpr uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Well-separated seed for substream `stream` of `seed`. Two finalizer
  // rounds decorrelate (seed, stream) pairs that differ in few bits.
  static constexpr uint64_t substream_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = mix64(seed + kGolden);
    return mix64(z ^ (stream + 1) * kGolden);
  }

  static Rng substream(uint64_t seed, uint64_t stream) {
    return Rng(substream_seed(seed, stream));
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += kGolden);
    return mix64(z);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n). Lemire's multiply-shift with rejection.
  uint64_t bounded(uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<__uint128_t>(next_u64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached so consecutive draws consume one uniform pair per two normals.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream-domain tags. Every consumer of randomness derives its streams as
// substream(substream(seed, tag), index) so no two subsystems ever share a
// stream even when handed the same user seed.
namespace rng_streams {
constexpr uint64_t kDatagenSample = 0x01;
constexpr uint64_t kSplit = 0x02;
constexpr uint64_t kPerturb = 0x03;
constexpr uint64_t kEpochShuffle = 0x04;
constexpr uint64_t kBatchNoise = 0x05;
constexpr uint64_t kParamInit = 0x06;
constexpr uint64_t kGradcheck = 0x07;
}  // namespace rng_streams

}  // namespace fairseg
