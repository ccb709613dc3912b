#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lapsim/image.hpp"
#include "lapsim/jitter.hpp"

namespace lapsim {

/// Unreadable/missing inputs and unusable directories.
class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Corrupt files, bad magic numbers, checksum mismatches.
class integrity_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// PNG

/// Decodes a PNG to a [0,1] float raster. Gray and gray+alpha map directly;
/// RGB(A) is reduced to luma with Rec. 601 weights. 8- and 16-bit depths
/// are supported (palette and sub-byte gray are expanded by the decoder).
Image read_image_gray(const std::string& path);

/// Reads only the IHDR dimensions.
void read_png_size(const std::string& path, int& height, int& width);

/// Stores a [0,1] image as 16-bit grayscale PNG. Values are clamped and
/// rounded half away from zero onto the 16-bit lattice, matching quantize().
void write_png_gray16(const std::string& path, const Image& image);

/// Interleaved 8-bit RGB raster for visualization output.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb; // 3 * height * width

  RgbImage() = default;
  RgbImage(int h, int w)
      : height(h), width(w), rgb(static_cast<size_t>(h) * w * 3, 0) {}

  uint8_t* px(int r, int c) { return &rgb[(static_cast<size_t>(r) * width + c) * 3]; }
  const uint8_t* px(int r, int c) const {
    return &rgb[(static_cast<size_t>(r) * width + c) * 3];
  }
};

void write_png_rgb8(const std::string& path, const RgbImage& image);

// ---------------------------------------------------------------------------
// Jitter sidecar ("LAPJ")
//
// Binary layout, little-endian:
//   magic "LAPJ" | version u32 | width u32 | record count u32
//   height u32 (duplication height for flow reconstruction; 0 = curves only)
//   records: direction u32 (0 roll, 1 pitch) | subdivision u32 | width x f64

struct SidecarRecord {
  Direction direction = Direction::roll;
  uint32_t subdivision = 0;
  std::vector<double> samples;
};

struct Sidecar {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<SidecarRecord> records;

  /// All records of one direction, ordered by subdivision index.
  std::vector<JitterCurve> curves(Direction dir) const;
};

void write_sidecar(const std::string& path, const Sidecar& sidecar);
Sidecar read_sidecar(const std::string& path);

// ---------------------------------------------------------------------------
// CSV

/// Curve pair as "column,roll_px,pitch_px" rows; columns are 1-based to
/// match the t = k*tau sampling convention. Doubles are printed with
/// round-trip precision.
void write_curves_csv(const std::string& path, const JitterCurve& roll,
                      const JitterCurve& pitch);

// ---------------------------------------------------------------------------
// Checksums

std::string sha256_hex(const void* data, size_t size);
std::string sha256_hex(const std::string& text);
std::string sha256_file_hex(const std::string& path);

// ---------------------------------------------------------------------------
// Raw file helpers

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const void* data, size_t size);

} // namespace lapsim
