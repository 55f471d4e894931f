#include "sagnacsim/random.hpp"

#include <cmath>
#include <stdexcept>

namespace sagnacsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  (void)splitmix64(state);
  state ^= 0xd1b54a32d192ed03ull * (index + 1);
  (void)splitmix64(state);
  return splitmix64(state);
}

double Rng::uniform() {
  // 53 random bits into [0, 1)
  return (engine_() >> 11) * 0x1.0p-53;
}

namespace {

// Hormann's PTRD transformed-rejection Poisson sampler, exact for mean >= 10.
std::uint64_t poisson_ptrd(Rng& rng, double mu) {
  const double smu = std::sqrt(mu);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mu + k * log_mu - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
  }
}

std::uint64_t poisson_inversion(Rng& rng, double mu) {
  const double p0 = std::exp(-mu);
  double p = p0, cdf = p0;
  const double u = rng.uniform();
  std::uint64_t k = 0;
  while (u > cdf) {
    ++k;
    p *= mu / static_cast<double>(k);
    cdf += p;
    if (k > 2000) break;  // cdf rounding guard; unreachable for mu < 10
  }
  return k;
}

}  // namespace

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("Poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(*this, mean);
  return poisson_ptrd(*this, mean);
}

}  // namespace sagnacsim
