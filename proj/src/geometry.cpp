#include "lapsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace lapsim {

FlowField build_jitter_map(const JitterCurve& roll, const JitterCurve& pitch,
                           int height) {
  if (roll.width() != pitch.width())
    throw std::invalid_argument("build_jitter_map: roll/pitch width mismatch");
  if (roll.width() < 1)
    throw std::invalid_argument("build_jitter_map: empty curves");
  if (height < 1)
    throw std::invalid_argument("build_jitter_map: height must be >= 1");

  const int width = roll.width();
  FlowField field(height, width);
  for (int r = 0; r < height; ++r) {
    for (int k = 0; k < width; ++k) {
      field.dv(r, k) = roll.samples[k];  // cross-track: displaces rows
      field.du(r, k) = pitch.samples[k]; // along-track: displaces columns
    }
  }
  return field;
}

namespace {

inline float sample_bilinear(const Image& img, double y, double x,
                             BoundaryPolicy boundary) {
  const int h = img.height();
  const int w = img.width();

  if (boundary == BoundaryPolicy::clamp_edge) {
    if (y < 0.0) y = 0.0;
    if (y > h - 1.0) y = h - 1.0;
    if (x < 0.0) x = 0.0;
    if (x > w - 1.0) x = w - 1.0;
  }

  const double yf = std::floor(y);
  const double xf = std::floor(x);
  const int r0 = static_cast<int>(yf);
  const int c0 = static_cast<int>(xf);
  const double fy = y - yf;
  const double fx = x - xf;

  auto tap = [&](int r, int c) -> double {
    if (r < 0 || r >= h || c < 0 || c >= w)
      return 0.0; // zero_fill: out-of-raster taps contribute nothing
    return img.at(r, c);
  };

  const double v00 = tap(r0, c0);
  const double v01 = tap(r0, c0 + 1);
  const double v10 = tap(r0 + 1, c0);
  const double v11 = tap(r0 + 1, c0 + 1);

  return static_cast<float>((1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                            fy * ((1.0 - fx) * v10 + fx * v11));
}

} // namespace

Image grid_sample(const Image& image, const FlowField& flow, BoundaryPolicy boundary) {
  if (!flow.same_shape(image))
    throw std::invalid_argument("grid_sample: image/flow shape mismatch");

  const int h = image.height();
  const int w = image.width();
  Image out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double dv = flow.dv(r, c);
      const double du = flow.du(r, c);
      if (!std::isfinite(dv) || !std::isfinite(du))
        throw std::domain_error("grid_sample: non-finite flow");
      out.at(r, c) = sample_bilinear(image, r + dv, c + du, boundary);
    }
  }
  return out;
}

Image deform_multi_subdivision(const Image& image, const std::vector<FlowField>& maps,
                               BoundaryPolicy boundary) {
  if (maps.empty())
    throw std::invalid_argument("deform_multi_subdivision: empty map list");
  for (const FlowField& m : maps)
    if (!m.same_shape(image))
      throw std::invalid_argument("deform_multi_subdivision: map shape mismatch");

  const int h = image.height();
  const int w = image.width();
  std::vector<double> acc(static_cast<size_t>(h) * w, 0.0);
  for (const FlowField& m : maps) {
    const Image warped = grid_sample(image, m, boundary);
    const float* p = warped.data();
    for (size_t i = 0; i < acc.size(); ++i)
      acc[i] += p[i];
  }

  Image out(h, w);
  const double inv = 1.0 / static_cast<double>(maps.size());
  for (size_t i = 0; i < acc.size(); ++i)
    out.data()[i] = static_cast<float>(acc[i] * inv);
  return out;
}

FlowField flow_from_noisy_map(const FlowField& noisy_map) {
  FlowField out(noisy_map.height(), noisy_map.width());
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      out.du(r, c) = -noisy_map.du(r, c);
      out.dv(r, c) = -noisy_map.dv(r, c);
    }
  }
  return out;
}

FlowField mean_flow(const std::vector<FlowField>& maps) {
  if (maps.empty())
    throw std::invalid_argument("mean_flow: empty map list");
  FlowField acc(maps[0].height(), maps[0].width());
  for (const FlowField& m : maps) {
    if (!m.same_shape(acc))
      throw std::invalid_argument("mean_flow: map shape mismatch");
    for (int r = 0; r < acc.height(); ++r) {
      for (int c = 0; c < acc.width(); ++c) {
        acc.du(r, c) += m.du(r, c);
        acc.dv(r, c) += m.dv(r, c);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(maps.size());
  for (int r = 0; r < acc.height(); ++r) {
    for (int c = 0; c < acc.width(); ++c) {
      acc.du(r, c) *= inv;
      acc.dv(r, c) *= inv;
    }
  }
  return acc;
}

Image precorrect(const Image& degraded, const std::vector<FlowField>& noisy_maps,
                 BoundaryPolicy boundary) {
  return grid_sample(degraded, flow_from_noisy_map(mean_flow(noisy_maps)), boundary);
}

double flow_l1_distance(const FlowField& a, const FlowField& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("flow_l1_distance: shape mismatch");
  double sum = 0.0;
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      sum += std::fabs(a.du(r, c) - b.du(r, c));
      sum += std::fabs(a.dv(r, c) - b.dv(r, c));
    }
  }
  return sum / (2.0 * a.height() * a.width());
}

} // namespace lapsim
