#include "lapsim/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lapsim {

namespace {

void hsv_to_rgb(double h, double s, double v, uint8_t* out) {
  h = h - std::floor(h); // wrap into [0,1)
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  out[0] = static_cast<uint8_t>(std::lround((r + m) * 255.0));
  out[1] = static_cast<uint8_t>(std::lround((g + m) * 255.0));
  out[2] = static_cast<uint8_t>(std::lround((b + m) * 255.0));
}

// 5x7 glyphs, one byte per row, low 5 bits used, bit 4 = leftmost column.
// Uppercase, digits and a few symbols; lowercase is folded to uppercase.
struct Glyph {
  char ch;
  uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x11, 0x1F, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
};

const Glyph* find_glyph(char ch) {
  if (ch >= 'a' && ch <= 'z')
    ch = static_cast<char>(ch - 'a' + 'A');
  for (const Glyph& g : kFont)
    if (g.ch == ch)
      return &g;
  return nullptr;
}

void put_pixel(RgbImage& img, int x, int y, uint8_t r, uint8_t g, uint8_t b) {
  if (x < 0 || x >= img.width || y < 0 || y >= img.height)
    return;
  uint8_t* p = img.px(y, x);
  p[0] = r; p[1] = g; p[2] = b;
}

void draw_text(RgbImage& img, int x, int y, const std::string& text, uint8_t r,
               uint8_t g, uint8_t b) {
  for (char ch : text) {
    if (const Glyph* glyph = find_glyph(ch)) {
      for (int gy = 0; gy < 7; ++gy)
        for (int gx = 0; gx < 5; ++gx)
          if (glyph->rows[gy] & (0x10 >> gx))
            put_pixel(img, x + gx, y + gy, r, g, b);
    }
    x += 6;
  }
}

int text_width(const std::string& text) { return 6 * static_cast<int>(text.size()); }

void draw_line(RgbImage& img, double x0, double y0, double x1, double y1,
               uint8_t r, uint8_t g, uint8_t b) {
  const double dx = x1 - x0, dy = y1 - y0;
  const int steps = std::max(1, static_cast<int>(std::ceil(
                                    std::max(std::fabs(dx), std::fabs(dy)))));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    put_pixel(img, static_cast<int>(std::lround(x0 + t * dx)),
              static_cast<int>(std::lround(y0 + t * dy)), r, g, b);
  }
}

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

} // namespace

RgbImage colorize_flow(const FlowField& flow) {
  RgbImage out(flow.height(), flow.width());
  double max_mag = 0.0;
  for (int r = 0; r < flow.height(); ++r)
    for (int c = 0; c < flow.width(); ++c)
      max_mag = std::max(max_mag, std::hypot(flow.du(r, c), flow.dv(r, c)));

  for (int r = 0; r < flow.height(); ++r) {
    for (int c = 0; c < flow.width(); ++c) {
      const double du = flow.du(r, c);
      const double dv = flow.dv(r, c);
      const double mag = std::hypot(du, dv);
      const double hue =
          (mag > 0.0) ? (std::atan2(dv, du) + M_PI) / (2.0 * M_PI) : 0.0;
      const double sat = (max_mag > 0.0) ? mag / max_mag : 0.0;
      hsv_to_rgb(hue, sat, 1.0, out.px(r, c));
    }
  }
  return out;
}

RgbImage render_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& y_label, int width, int height) {
  if (series.empty())
    throw std::invalid_argument("render_line_plot: no series");
  size_t n = 0;
  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      if (first) {
        y_min = y_max = v;
        first = false;
      }
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (n == 0)
    throw std::invalid_argument("render_line_plot: empty series");
  if (y_max - y_min < 1e-12) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  RgbImage img(height, width);
  std::fill(img.rgb.begin(), img.rgb.end(), 0xFF);

  const int left = 70, right = 16, top = 16, bottom = 42;
  const int px0 = left, px1 = width - right;
  const int py0 = top, py1 = height - bottom;

  auto x_of = [&](double k) {
    return px0 + (k - 1.0) / std::max<double>(1.0, n - 1) * (px1 - px0);
  };
  auto y_of = [&](double v) {
    return py1 - (v - y_min) / (y_max - y_min) * (py1 - py0);
  };

  // frame
  draw_line(img, px0, py0, px1, py0, 0, 0, 0);
  draw_line(img, px0, py1, px1, py1, 0, 0, 0);
  draw_line(img, px0, py0, px0, py1, 0, 0, 0);
  draw_line(img, px1, py0, px1, py1, 0, 0, 0);

  for (int t = 0; t <= 4; ++t) {
    const double v = y_min + (y_max - y_min) * t / 4.0;
    const int y = static_cast<int>(std::lround(y_of(v)));
    draw_line(img, px0 - 4, y, px0, y, 0, 0, 0);
    const std::string label = format_tick(v);
    draw_text(img, px0 - 8 - text_width(label), y - 3, label, 0, 0, 0);
  }
  for (int t = 0; t <= 5; ++t) {
    const double k = 1.0 + (static_cast<double>(n) - 1.0) * t / 5.0;
    const int x = static_cast<int>(std::lround(x_of(k)));
    draw_line(img, x, py1, x, py1 + 4, 0, 0, 0);
    const std::string label = format_tick(std::round(k));
    draw_text(img, x - text_width(label) / 2, py1 + 8, label, 0, 0, 0);
  }
  draw_text(img, px0, height - 14, "COLUMN", 0, 0, 0);
  draw_text(img, 6, py0, y_label, 0, 0, 0);

  for (const PlotSeries& s : series) {
    for (size_t i = 0; i + 1 < s.values.size(); ++i)
      draw_line(img, x_of(static_cast<double>(i + 1)), y_of(s.values[i]),
                x_of(static_cast<double>(i + 2)), y_of(s.values[i + 1]), s.r,
                s.g, s.b);
  }

  int ly = py0 + 6;
  for (const PlotSeries& s : series) {
    const int lx = px1 - 24 - text_width(s.name);
    draw_line(img, lx - 22, ly + 3, lx - 6, ly + 3, s.r, s.g, s.b);
    draw_text(img, lx, ly, s.name, 0, 0, 0);
    ly += 12;
  }
  return img;
}

} // namespace lapsim
