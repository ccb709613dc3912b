#include "lapsim/sensor.hpp"

#include <cmath>
#include <stdexcept>

#include "lapsim/rng.hpp"

namespace lapsim {

namespace {

void require_unit_range(const Image& image, const char* op) {
  for (float v : image.pixels())
    if (!(v >= 0.0f && v <= 1.0f))
      throw std::domain_error(std::string(op) + ": pixel values must be in [0,1]");
}

} // namespace

Image inverse_gamma(const Image& image, const GammaConfig& cfg) {
  if (cfg.gamma <= 0.0)
    throw std::invalid_argument("inverse_gamma: gamma must be > 0");
  require_unit_range(image, "inverse_gamma");
  Image out = image;
  if (cfg.gamma == 1.0)
    return out;
  for (float& v : out.pixels())
    v = static_cast<float>(std::pow(static_cast<double>(v), cfg.gamma));
  return out;
}

Image forward_gamma(const Image& image, const GammaConfig& cfg) {
  if (cfg.gamma <= 0.0)
    throw std::invalid_argument("forward_gamma: gamma must be > 0");
  require_unit_range(image, "forward_gamma");
  Image out = image;
  if (cfg.gamma == 1.0)
    return out;
  const double inv = 1.0 / cfg.gamma;
  for (float& v : out.pixels())
    v = static_cast<float>(std::pow(static_cast<double>(v), inv));
  return out;
}

Image add_sensor_noise(const Image& image, const NoiseConfig& cfg) {
  if (cfg.sigma_gauss < 0.0 || cfg.lambda_poisson < 0.0)
    throw std::invalid_argument("add_sensor_noise: noise parameters must be >= 0");
  require_unit_range(image, "add_sensor_noise");

  Image out = image;
  if (cfg.sigma_gauss == 0.0 && cfg.lambda_poisson == 0.0)
    return out;

  float* p = out.data();
  const size_t n = out.size();
  for (size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(cfg.seed, i));
    double v = p[i];
    if (cfg.lambda_poisson > 0.0)
      v = cfg.lambda_poisson * static_cast<double>(rng.poisson(v / cfg.lambda_poisson));
    if (cfg.sigma_gauss > 0.0)
      v += cfg.sigma_gauss * rng.gaussian();
    p[i] = static_cast<float>(v);
  }
  return out;
}

Image clamp01(const Image& image) {
  Image out = image;
  for (float& v : out.pixels()) {
    if (!(v >= 0.0f)) // also catches NaN
      v = 0.0f;
    else if (v > 1.0f)
      v = 1.0f;
  }
  return out;
}

Image quantize(const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::invalid_argument("quantize: bit_depth must be 8 or 16");
  const double levels = (bit_depth == 8) ? 255.0 : 65535.0;
  Image out = image;
  for (float& v : out.pixels()) {
    double x = v;
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
    v = static_cast<float>(std::round(x * levels) / levels);
  }
  return out;
}

} // namespace lapsim
