#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lapsim {

/// Single-channel raster, row-major, values nominally in [0,1].
/// Pixel storage is 32-bit float; all heavier arithmetic is done in double
/// by the operations that consume it.
class Image {
public:
  Image() = default;
  Image(int height, int width, float fill = 0.0f)
      : height_(height), width_(width),
        pixels_(static_cast<size_t>(height) * static_cast<size_t>(width), fill) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("Image: dimensions must be >= 1");
  }

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return pixels_.size(); }

  float& at(int r, int c) { return pixels_[static_cast<size_t>(r) * width_ + c]; }
  float at(int r, int c) const { return pixels_[static_cast<size_t>(r) * width_ + c]; }

  float* data() { return pixels_.data(); }
  const float* data() const { return pixels_.data(); }

  std::vector<float>& pixels() { return pixels_; }
  const std::vector<float>& pixels() const { return pixels_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  /// Interior rectangle [x0, x0+w) x [y0, y0+h), used for margin evaluation.
  Image crop(int y0, int x0, int h, int w) const {
    if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > height_ || x0 + w > width_)
      throw std::invalid_argument("Image::crop: rectangle out of bounds");
    Image out(h, w);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        out.at(r, c) = at(y0 + r, x0 + c);
    return out;
  }

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<float> pixels_;
};

/// Rectangle in pixel coordinates; records the region a metric was
/// evaluated over.
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

} // namespace lapsim
