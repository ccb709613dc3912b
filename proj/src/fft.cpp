#include "lapsim/fft.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lapsim {

namespace {

using cd = std::complex<double>;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n)
    p <<= 1;
  return p;
}

// Iterative Cooley-Tukey, n a power of two.
void fft_pow2(std::vector<cd>& a, bool inverse) {
  const size_t n = a.size();
  if (n < 2)
    return;

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j];
        const cd v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein chirp-z for arbitrary n, built on power-of-two transforms.
void fft_bluestein(std::vector<cd>& a, bool inverse) {
  const size_t n = a.size();
  const size_t m = next_pow2(2 * n - 1);

  // chirp_k = exp(-i pi k^2 / n); k^2 taken mod 2n keeps the sine argument
  // small and exact in int64.
  std::vector<cd> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    const uint64_t k2 = (static_cast<uint64_t>(k) * k) % (2 * n);
    const double ang = (inverse ? 1.0 : -1.0) * M_PI * static_cast<double>(k2) /
                       static_cast<double>(n);
    chirp[k] = cd(std::cos(ang), std::sin(ang));
  }

  std::vector<cd> p(m, cd(0.0, 0.0)), q(m, cd(0.0, 0.0));
  for (size_t k = 0; k < n; ++k)
    p[k] = a[k] * chirp[k];
  q[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k)
    q[k] = q[m - k] = std::conj(chirp[k]);

  fft_pow2(p, false);
  fft_pow2(q, false);
  for (size_t k = 0; k < m; ++k)
    p[k] *= q[k];
  fft_pow2(p, true);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (size_t k = 0; k < n; ++k)
    a[k] = p[k] * inv_m * chirp[k];
}

void fft_any(std::vector<cd>& a, bool inverse) {
  if (a.empty())
    throw std::invalid_argument("fft: empty input");
  if (is_pow2(a.size()))
    fft_pow2(a, inverse);
  else
    fft_bluestein(a, inverse);
}

} // namespace

void fft(std::vector<cd>& data, bool inverse) {
  fft_any(data, inverse);
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (cd& x : data)
      x *= inv_n;
  }
}

void fft_2d(std::vector<cd>& data, int height, int width, bool inverse) {
  if (height < 1 || width < 1 ||
      data.size() != static_cast<size_t>(height) * static_cast<size_t>(width))
    throw std::invalid_argument("fft_2d: shape mismatch");

  std::vector<cd> line;
  line.reserve(std::max(height, width));

  for (int r = 0; r < height; ++r) {
    line.assign(data.begin() + static_cast<size_t>(r) * width,
                data.begin() + static_cast<size_t>(r + 1) * width);
    fft(line, inverse);
    std::copy(line.begin(), line.end(), data.begin() + static_cast<size_t>(r) * width);
  }
  for (int c = 0; c < width; ++c) {
    line.resize(height);
    for (int r = 0; r < height; ++r)
      line[r] = data[static_cast<size_t>(r) * width + c];
    fft(line, inverse);
    for (int r = 0; r < height; ++r)
      data[static_cast<size_t>(r) * width + c] = line[r];
  }
}

} // namespace lapsim
