#pragma once

#include <cstdint>
#include <random>

namespace sagnacsim {

/// splitmix64 step; used to derive decorrelated substream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent substream seed for (seed, index): parallel units seeded this
/// way give schedule-independent results.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// mt19937_64 wrapped with hand-rolled samplers so that draws are
/// bit-identical across standard libraries (std::poisson_distribution is
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// uniform double in [0, 1)
  double uniform();

  /// Poisson sample; inversion below mean 10, PTRD transformed rejection above.
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sagnacsim
