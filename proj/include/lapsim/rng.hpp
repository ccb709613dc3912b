#pragma once

#include <cstdint>

namespace lapsim {

/// Derives an independent stream key from a base seed and stream indices.
/// Used everywhere a module needs "fresh draws" for a sub-task (per image,
/// per subdivision, per pixel) without sharing mutable RNG state.
uint64_t mix_seed(uint64_t seed, uint64_t a);
uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b);
uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

/// Small counter-based generator (splitmix64 core). A stream is fully
/// determined by its key, so draws are reproducible regardless of thread
/// scheduling or call order across streams.
class Rng {
public:
  explicit Rng(uint64_t key) : state_(key) {}

  uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (consumes two uniforms).
  double gaussian();

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

  /// Poisson deviate. Sequential search below mean 10, Hormann's PTRS
  /// transformed rejection above; both consume a variable number of
  /// uniforms from this stream only.
  uint64_t poisson(double mean);

private:
  uint64_t state_;
};

} // namespace lapsim
