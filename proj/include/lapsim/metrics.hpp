#pragma once

#include <string>

#include "lapsim/image.hpp"

namespace lapsim {

/// Full-reference scores for one evaluated pair. psnr_db is +infinity for
/// identical inputs. region records the rectangle the scores were computed
/// over (shrunk when a margin is applied).
struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double gmsd = 0.0;
  double spectral_l1 = 0.0;
  Rect region;
};

/// 10 log10(peak^2 / MSE); +infinity for identical inputs.
double psnr(const Image& ref, const Image& test, double peak = 1.0);

/// Single-scale SSIM, 11x11 Gaussian window sigma 1.5, K1 = 0.01,
/// K2 = 0.03, peak 1.0; mean over valid window positions. Requires
/// H, W >= 11.
double ssim(const Image& ref, const Image& test);

/// Gradient magnitude similarity deviation (lower is better): 2x average
/// pooling, Prewitt/3 gradients with zero padding, similarity map
/// (2 m_r m_t + c) / (m_r^2 + m_t^2 + c) with c = 0.0026 for peak-1 images,
/// then the sample standard deviation of the map. Requires H, W >= 4.
double gmsd(const Image& ref, const Image& test);

/// Mean absolute difference of unnormalized 2-D DFT coefficients, real and
/// imaginary parts counted as separate scalars (divisor 2*H*W).
double spectral_l1(const Image& ref, const Image& test);

/// All four metrics over the interior region that excludes `margin` pixels
/// on every side (margin 0 evaluates the full frame).
MetricReport evaluate_pair(const Image& ref, const Image& test, int margin = 0);

} // namespace lapsim
