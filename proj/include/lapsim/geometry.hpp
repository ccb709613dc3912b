#pragma once

#include <vector>

#include "lapsim/image.hpp"
#include "lapsim/jitter.hpp"

namespace lapsim {

/// Per-pixel backward-warp displacement field. du displaces the column
/// (width / pushbroom axis), dv displaces the row (height / sensor-line
/// axis). Roll jitter lands in dv (cross-track offset), pitch jitter in du
/// (along-track offset).
class FlowField {
public:
  FlowField() = default;
  FlowField(int height, int width)
      : height_(height), width_(width),
        du_(static_cast<size_t>(height) * width, 0.0),
        dv_(static_cast<size_t>(height) * width, 0.0) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("FlowField: dimensions must be >= 1");
  }

  int height() const { return height_; }
  int width() const { return width_; }

  double& du(int r, int c) { return du_[static_cast<size_t>(r) * width_ + c]; }
  double du(int r, int c) const { return du_[static_cast<size_t>(r) * width_ + c]; }
  double& dv(int r, int c) { return dv_[static_cast<size_t>(r) * width_ + c]; }
  double dv(int r, int c) const { return dv_[static_cast<size_t>(r) * width_ + c]; }

  bool same_shape(const FlowField& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool same_shape(const Image& img) const {
    return height_ == img.height() && width_ == img.width();
  }

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> du_, dv_;
};

/// Out-of-bounds handling for backward warping. zero_fill leaves black
/// borders (the pre-correction default); clamp_edge replicates edge pixels
/// (the degradation default, so deformed images carry no injected black).
enum class BoundaryPolicy { zero_fill, clamp_edge };

/// Duplicates the two per-column curves along the height axis into an HxW
/// field: dv(r,k) = roll[k], du(r,k) = pitch[k]. All rows are identical
/// because a sensor line is imaged at a single instant.
FlowField build_jitter_map(const JitterCurve& roll, const JitterCurve& pitch,
                           int height);

/// Backward-warp resampling with bilinear interpolation:
///   out(r,k) = image sampled at (r + dv(r,k), k + du(r,k)).
Image grid_sample(const Image& image, const FlowField& flow, BoundaryPolicy boundary);

/// Mean of the image warped by each of the M subdivision maps; the average
/// of slightly shifted copies is what produces intra-line motion blur.
Image deform_multi_subdivision(const Image& image, const std::vector<FlowField>& maps,
                               BoundaryPolicy boundary);

/// Optical flow approximation for pre-correction: element-wise negation of
/// the noisy jitter map.
FlowField flow_from_noisy_map(const FlowField& noisy_map);

/// First restoration stage: warps the degraded image by the negated mean of
/// the M noisy subdivision maps (a single grid_sample call).
Image precorrect(const Image& degraded, const std::vector<FlowField>& noisy_maps,
                 BoundaryPolicy boundary);

/// Mean of the M maps (the map actually used by precorrect, before negation).
FlowField mean_flow(const std::vector<FlowField>& maps);

/// Mean absolute difference over all 2*H*W scalar components.
double flow_l1_distance(const FlowField& a, const FlowField& b);

} // namespace lapsim
