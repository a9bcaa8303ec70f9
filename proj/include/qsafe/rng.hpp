#pragma once

#include <cstdint>
#include <random>

namespace qsafe {

// Deterministic stream on top of std::mt19937_64. Substreams are keyed by
// (seed, index) through splitmix64 so sharded sampling is reproducible
// no matter how shards are scheduled.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  // 53-bit uniform in [0,1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // standard normal (Box-Muller; one draw per call, the partner is dropped)
  double normal();

  SeededRng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qsafe
