#include "lapsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace lapsim {

namespace {

constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

uint64_t splitmix_fini(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

uint64_t mix_seed(uint64_t seed, uint64_t a) {
  return splitmix_fini(seed + kGamma * (a + 1));
}

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(seed, a, b), c);
}

uint64_t Rng::next_u64() {
  state_ += kGamma;
  return splitmix_fini(state_);
}

double Rng::next_double() {
  return (next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double Rng::gaussian() {
  // u1 must be strictly positive for the log.
  double u1 = next_double();
  if (u1 <= 0.0)
    u1 = 0x1.0p-53;
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("Rng::poisson: mean must be finite and >= 0");
  if (mean == 0.0)
    return 0;

  if (mean < 10.0) {
    // Knuth's sequential search; expected iterations = mean + 1.
    const double limit = std::exp(-mean);
    uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

  // PTRS transformed rejection (Hormann 1993), as used in numpy's kit.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);

  for (;;) {
    const double u = next_double() - 0.5;
    const double v = next_double();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r)
      return static_cast<uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us))
      continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0))
      return static_cast<uint64_t>(kf);
  }
}

} // namespace lapsim
