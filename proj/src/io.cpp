#include "lapsim/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace lapsim {

// ---------------------------------------------------------------------------
// PNG

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f)
      std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f)
    throw input_error("cannot open '" + path + "'");
  return f;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png)
      info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw std::runtime_error("libpng allocation failed");
    }
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png)
      info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_write_struct(&png, &info);
      throw std::runtime_error("libpng allocation failed");
    }
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

} // namespace

Image read_image_gray(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  PngReader ctx;

  std::vector<uint8_t> bytes;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0, depth = 0;

  if (setjmp(png_jmpbuf(ctx.png)))
    throw integrity_error("PNG decode failed for '" + path + "'");

  png_init_io(ctx.png, file.get());
  png_read_info(ctx.png, ctx.info);

  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  const int color_type = png_get_color_type(ctx.png, ctx.info);
  depth = png_get_bit_depth(ctx.png, ctx.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  depth = png_get_bit_depth(ctx.png, ctx.info);
  channels = png_get_channels(ctx.png, ctx.info);
  if (depth != 8 && depth != 16)
    throw integrity_error("unsupported PNG bit depth in '" + path + "'");

  const size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  bytes.resize(row_bytes * height);
  rows.resize(height);
  for (int r = 0; r < height; ++r)
    rows[r] = bytes.data() + row_bytes * r;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  Image out(height, width);
  const double scale = (depth == 8) ? 1.0 / 255.0 : 1.0 / 65535.0;
  const bool color = channels >= 3;
  const int bpc = depth / 8;
  for (int r = 0; r < height; ++r) {
    const uint8_t* row = rows[r];
    for (int c = 0; c < width; ++c) {
      const uint8_t* p = row + static_cast<size_t>(c) * channels * bpc;
      auto sample = [&](int ch) -> double {
        const uint8_t* s = p + ch * bpc;
        return (depth == 8) ? s[0] : static_cast<double>((s[0] << 8) | s[1]);
      };
      double v;
      if (color)
        v = 0.299 * sample(0) + 0.587 * sample(1) + 0.114 * sample(2);
      else
        v = sample(0);
      out.at(r, c) = static_cast<float>(v * scale);
    }
  }
  return out;
}

void read_png_size(const std::string& path, int& height, int& width) {
  FilePtr file = open_file(path, "rb");
  PngReader ctx;
  if (setjmp(png_jmpbuf(ctx.png)))
    throw integrity_error("PNG header decode failed for '" + path + "'");
  png_init_io(ctx.png, file.get());
  png_read_info(ctx.png, ctx.info);
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
}

void write_png_gray16(const std::string& path, const Image& image) {
  FilePtr file = open_file(path, "wb");
  PngWriter ctx;

  const int h = image.height(), w = image.width();
  std::vector<uint8_t> bytes(static_cast<size_t>(h) * w * 2);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double x = image.at(r, c);
      if (x < 0.0) x = 0.0;
      if (x > 1.0) x = 1.0;
      const auto q = static_cast<uint16_t>(std::round(x * 65535.0));
      uint8_t* p = &bytes[(static_cast<size_t>(r) * w + c) * 2];
      p[0] = static_cast<uint8_t>(q >> 8); // PNG samples are big-endian
      p[1] = static_cast<uint8_t>(q & 0xFF);
    }
  }
  std::vector<png_bytep> rows(h);
  for (int r = 0; r < h; ++r)
    rows[r] = bytes.data() + static_cast<size_t>(r) * w * 2;

  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("PNG encode failed for '" + path + "'");

  png_init_io(ctx.png, file.get());
  png_set_compression_level(ctx.png, 6); // pinned so outputs are byte-stable
  png_set_IHDR(ctx.png, ctx.info, w, h, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

void write_png_rgb8(const std::string& path, const RgbImage& image) {
  if (image.height < 1 || image.width < 1 ||
      image.rgb.size() != static_cast<size_t>(image.height) * image.width * 3)
    throw std::invalid_argument("write_png_rgb8: malformed raster");

  FilePtr file = open_file(path, "wb");
  PngWriter ctx;

  std::vector<png_bytep> rows(image.height);
  for (int r = 0; r < image.height; ++r)
    rows[r] = const_cast<uint8_t*>(image.rgb.data()) +
              static_cast<size_t>(r) * image.width * 3;

  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("PNG encode failed for '" + path + "'");

  png_init_io(ctx.png, file.get());
  png_set_compression_level(ctx.png, 6);
  png_set_IHDR(ctx.png, ctx.info, image.width, image.height, 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

// ---------------------------------------------------------------------------
// Sidecar

namespace {

constexpr uint32_t kSidecarVersion = 1;
const char kSidecarMagic[4] = {'L', 'A', 'P', 'J'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
}

void put_f64(std::vector<uint8_t>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<uint8_t>((bits >> (8 * i)) & 0xFF));
}

class ByteCursor {
public:
  ByteCursor(const std::vector<uint8_t>& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
      v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    uint64_t bits = 0;
    for (int i = 7; i >= 0; --i)
      bits = (bits << 8) | bytes_[pos_ + i];
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  void raw(void* dst, size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  bool done() const { return pos_ == bytes_.size(); }

private:
  void need(size_t n) {
    if (pos_ + n > bytes_.size())
      throw integrity_error("truncated sidecar '" + path_ + "'");
  }

  const std::vector<uint8_t>& bytes_;
  const std::string& path_;
  size_t pos_ = 0;
};

} // namespace

std::vector<JitterCurve> Sidecar::curves(Direction dir) const {
  std::vector<const SidecarRecord*> selected;
  for (const SidecarRecord& rec : records)
    if (rec.direction == dir)
      selected.push_back(&rec);
  std::sort(selected.begin(), selected.end(),
            [](const SidecarRecord* a, const SidecarRecord* b) {
              return a->subdivision < b->subdivision;
            });
  std::vector<JitterCurve> out;
  out.reserve(selected.size());
  for (const SidecarRecord* rec : selected)
    out.push_back(JitterCurve{rec->samples, dir});
  return out;
}

void write_sidecar(const std::string& path, const Sidecar& sidecar) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kSidecarMagic, kSidecarMagic + 4);
  put_u32(out, kSidecarVersion);
  put_u32(out, sidecar.width);
  put_u32(out, static_cast<uint32_t>(sidecar.records.size()));
  put_u32(out, sidecar.height);
  for (const SidecarRecord& rec : sidecar.records) {
    if (rec.samples.size() != sidecar.width)
      throw std::invalid_argument("write_sidecar: record width mismatch");
    put_u32(out, rec.direction == Direction::roll ? 0u : 1u);
    put_u32(out, rec.subdivision);
    for (double v : rec.samples)
      put_f64(out, v);
  }
  write_file_bytes(path, out.data(), out.size());
}

Sidecar read_sidecar(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  ByteCursor cur(bytes, path);

  char magic[4];
  cur.raw(magic, 4);
  if (std::memcmp(magic, kSidecarMagic, 4) != 0)
    throw integrity_error("bad sidecar magic in '" + path + "'");
  const uint32_t version = cur.u32();
  if (version != kSidecarVersion)
    throw integrity_error("unsupported sidecar version in '" + path + "'");

  Sidecar sc;
  sc.width = cur.u32();
  const uint32_t count = cur.u32();
  sc.height = cur.u32();
  sc.records.resize(count);
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t dir = cur.u32();
    if (dir > 1)
      throw integrity_error("bad direction tag in '" + path + "'");
    sc.records[i].direction = dir == 0 ? Direction::roll : Direction::pitch;
    sc.records[i].subdivision = cur.u32();
    sc.records[i].samples.resize(sc.width);
    for (uint32_t k = 0; k < sc.width; ++k)
      sc.records[i].samples[k] = cur.f64();
  }
  if (!cur.done())
    throw integrity_error("trailing bytes in sidecar '" + path + "'");
  return sc;
}

// ---------------------------------------------------------------------------
// CSV

void write_curves_csv(const std::string& path, const JitterCurve& roll,
                      const JitterCurve& pitch) {
  if (roll.width() != pitch.width())
    throw std::invalid_argument("write_curves_csv: width mismatch");
  FilePtr file = open_file(path, "wb");
  std::fprintf(file.get(), "column,roll_px,pitch_px\n");
  for (int k = 0; k < roll.width(); ++k)
    std::fprintf(file.get(), "%d,%.17g,%.17g\n", k + 1, roll.samples[k],
                 pitch.samples[k]);
}

// ---------------------------------------------------------------------------
// SHA-256

namespace {

constexpr uint32_t kSha256K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha256_block(uint32_t h[8], const uint8_t* p) {
  uint32_t w[64];
  for (int i = 0; i < 16; ++i)
    w[i] = (static_cast<uint32_t>(p[4 * i]) << 24) | (p[4 * i + 1] << 16) |
           (p[4 * i + 2] << 8) | p[4 * i + 3];
  for (int i = 16; i < 64; ++i) {
    const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
  uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
  for (int i = 0; i < 64; ++i) {
    const uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    const uint32_t ch = (e & f) ^ (~e & g);
    const uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
    const uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    const uint32_t t2 = s0 + maj;
    hh = g; g = f; f = e; e = d + t1;
    d = c; c = b; b = a; a = t1 + t2;
  }
  h[0] += a; h[1] += b; h[2] += c; h[3] += d;
  h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
}

} // namespace

std::string sha256_hex(const void* data, size_t size) {
  uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                   0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  const uint8_t* p = static_cast<const uint8_t*>(data);
  size_t full = size / 64;
  for (size_t i = 0; i < full; ++i)
    sha256_block(h, p + 64 * i);

  uint8_t tail[128] = {0};
  const size_t rem = size - 64 * full;
  std::memcpy(tail, p + 64 * full, rem);
  tail[rem] = 0x80;
  const size_t tail_len = (rem < 56) ? 64 : 128;
  const uint64_t bits = static_cast<uint64_t>(size) * 8;
  for (int i = 0; i < 8; ++i)
    tail[tail_len - 1 - i] = static_cast<uint8_t>((bits >> (8 * i)) & 0xFF);
  sha256_block(h, tail);
  if (tail_len == 128)
    sha256_block(h, tail + 64);

  static const char* hex = "0123456789abcdef";
  std::string out(64, '0');
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      out[8 * i + j] = hex[(h[i] >> (28 - 4 * j)) & 0xF];
  return out;
}

std::string sha256_hex(const std::string& text) {
  return sha256_hex(text.data(), text.size());
}

std::string sha256_file_hex(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  return sha256_hex(bytes.data(), bytes.size());
}

// ---------------------------------------------------------------------------
// Raw files

std::vector<uint8_t> read_file_bytes(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  std::fseek(file.get(), 0, SEEK_END);
  const long size = std::ftell(file.get());
  if (size < 0)
    throw input_error("cannot stat '" + path + "'");
  std::fseek(file.get(), 0, SEEK_SET);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  if (size > 0 && std::fread(bytes.data(), 1, bytes.size(), file.get()) != bytes.size())
    throw input_error("short read on '" + path + "'");
  return bytes;
}

void write_file_bytes(const std::string& path, const void* data, size_t size) {
  FilePtr file = open_file(path, "wb");
  if (size > 0 && std::fwrite(data, 1, size, file.get()) != size)
    throw std::runtime_error("short write on '" + path + "'");
}

} // namespace lapsim
