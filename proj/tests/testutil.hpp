#pragma once

#include <filesystem>
#include <string>

#include "lapsim/image.hpp"
#include "lapsim/rng.hpp"

namespace lapsim::test {

/// Smooth textured fixture image: a few random sinusoidal gratings plus
/// random soft rectangles, values in [0.05, 0.95]. Deterministic per seed.
inline Image textured_image(int height, int width, uint64_t seed) {
  Rng rng(seed);
  const double fy1 = rng.uniform(2.0, 9.0), fx1 = rng.uniform(2.0, 9.0);
  const double fy2 = rng.uniform(10.0, 25.0), fx2 = rng.uniform(10.0, 25.0);
  const double p1 = rng.uniform(0.0, 6.28), p2 = rng.uniform(0.0, 6.28);

  Image img(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double y = static_cast<double>(r) / height;
      const double x = static_cast<double>(c) / width;
      double v = 0.5 + 0.22 * std::sin(2.0 * M_PI * (fy1 * y + fx1 * x) + p1) +
                 0.13 * std::sin(2.0 * M_PI * (fy2 * y - fx2 * x) + p2);
      img.at(r, c) = static_cast<float>(v);
    }

  // Hard-edged rectangles give the warp something sharp to smear.
  const int boxes = 6;
  for (int b = 0; b < boxes; ++b) {
    const int bw = 1 + static_cast<int>(rng.uniform(4.0, width / 4.0));
    const int bh = 1 + static_cast<int>(rng.uniform(4.0, height / 4.0));
    const int x0 = static_cast<int>(rng.uniform(0.0, std::max(1, width - bw)));
    const int y0 = static_cast<int>(rng.uniform(0.0, std::max(1, height - bh)));
    const float level = static_cast<float>(rng.uniform(0.1, 0.9));
    for (int r = y0; r < y0 + bh && r < height; ++r)
      for (int c = x0; c < x0 + bw && c < width; ++c)
        img.at(r, c) = level;
  }

  for (float& v : img.pixels())
    v = std::min(0.95f, std::max(0.05f, v));
  return img;
}

inline Image random_image(int height, int width, uint64_t seed) {
  Rng rng(seed);
  Image img(height, width);
  for (float& v : img.pixels())
    v = static_cast<float>(rng.next_double());
  return img;
}

/// Unique scratch directory under the build tree's temp area; removed and
/// recreated on construction.
class TempDir {
public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / "lapsim_tests" / name) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string sub(const std::string& leaf) const { return (path_ / leaf).string(); }

private:
  std::filesystem::path path_;
};

} // namespace lapsim::test
