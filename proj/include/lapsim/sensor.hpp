#pragma once

#include <cstdint>

#include "lapsim/image.hpp"

namespace lapsim {

/// Gaussian-Poisson sensor noise parameters. lambda_poisson scales the
/// shot-noise term y = lambda * Poisson(x / lambda); lambda -> 0 recovers
/// the clean signal. sigma_gauss is the additive read-noise sigma.
struct NoiseConfig {
  double sigma_gauss = 0.01;
  double lambda_poisson = 1e-4;
  uint64_t seed = 0;
};

struct GammaConfig {
  double gamma = 2.2; // > 0
};

/// Display domain -> energy domain: out = in^gamma. Input must be in [0,1].
Image inverse_gamma(const Image& image, const GammaConfig& cfg);

/// Energy domain -> display domain: out = in^(1/gamma).
Image forward_gamma(const Image& image, const GammaConfig& cfg);

/// Adds signal-dependent shot noise plus additive Gaussian noise in the
/// energy domain. Draws are keyed per pixel index, so results do not depend
/// on traversal order. Output is not clamped; clamping happens at
/// quantization.
Image add_sensor_noise(const Image& image, const NoiseConfig& cfg);

/// Clamps to [0,1], snaps to the 2^bit_depth - 1 lattice (round half away
/// from zero), rescales. Idempotent. bit_depth must be 8 or 16.
Image quantize(const Image& image, int bit_depth);

/// Clamps every pixel into [0,1] (noise can leave the unit range; the gamma
/// ops require it).
Image clamp01(const Image& image);

} // namespace lapsim
