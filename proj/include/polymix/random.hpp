#pragma once

#include <cstdint>
#include <random>

namespace polymix {

// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of shard `shard` in stream `stream` under one root seed. Streams
/// separate independent batches, shards split one batch across workers.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                                 std::uint64_t shard) {
  return mix_seed(mix_seed(root + shard) ^ mix_seed(stream * 0x632be59bd9b4e019ULL + 1));
}

/// 64-bit Mersenne twister with a portable [0,1) mapping (53 random bits), so
/// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polymix
