#include "lapsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lapsim/fft.hpp"

namespace lapsim {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* op) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

// Separable correlation with a 1-D kernel, valid region only.
std::vector<double> gauss_valid(const std::vector<double>& in, int h, int w,
                                const std::vector<double>& kernel) {
  const int kw = static_cast<int>(kernel.size());
  const int out_w = w - kw + 1;
  const int out_h = h - kw + 1;

  std::vector<double> rows(static_cast<size_t>(h) * out_w, 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < out_w; ++c) {
      double s = 0.0;
      for (int t = 0; t < kw; ++t)
        s += kernel[t] * in[static_cast<size_t>(r) * w + c + t];
      rows[static_cast<size_t>(r) * out_w + c] = s;
    }

  std::vector<double> out(static_cast<size_t>(out_h) * out_w, 0.0);
  for (int r = 0; r < out_h; ++r)
    for (int c = 0; c < out_w; ++c) {
      double s = 0.0;
      for (int t = 0; t < kw; ++t)
        s += kernel[t] * rows[static_cast<size_t>(r + t) * out_w + c];
      out[static_cast<size_t>(r) * out_w + c] = s;
    }
  return out;
}

std::vector<double> ssim_window() {
  const int kw = 11;
  const double sigma = 1.5;
  std::vector<double> k(kw);
  double sum = 0.0;
  for (int i = 0; i < kw; ++i) {
    const double x = i - (kw - 1) / 2.0;
    k[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k)
    v /= sum;
  return k;
}

// 2x2 block mean with stride 2; trailing odd row/column dropped.
std::vector<double> avg_pool2(const std::vector<double>& in, int h, int w,
                              int& oh, int& ow) {
  oh = h / 2;
  ow = w / 2;
  std::vector<double> out(static_cast<size_t>(oh) * ow);
  for (int r = 0; r < oh; ++r)
    for (int c = 0; c < ow; ++c)
      out[static_cast<size_t>(r) * ow + c] =
          0.25 * (in[static_cast<size_t>(2 * r) * w + 2 * c] +
                  in[static_cast<size_t>(2 * r) * w + 2 * c + 1] +
                  in[static_cast<size_t>(2 * r + 1) * w + 2 * c] +
                  in[static_cast<size_t>(2 * r + 1) * w + 2 * c + 1]);
  return out;
}

// Prewitt gradient magnitude, kernels [1 0 -1; 1 0 -1; 1 0 -1]/3 and its
// transpose, zero padding.
std::vector<double> prewitt_magnitude(const std::vector<double>& in, int h, int w) {
  std::vector<double> out(static_cast<size_t>(h) * w);
  auto px = [&](int r, int c) -> double {
    if (r < 0 || r >= h || c < 0 || c >= w)
      return 0.0;
    return in[static_cast<size_t>(r) * w + c];
  };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double gx = (px(r - 1, c - 1) + px(r, c - 1) + px(r + 1, c - 1) -
                         px(r - 1, c + 1) - px(r, c + 1) - px(r + 1, c + 1)) /
                        3.0;
      const double gy = (px(r - 1, c - 1) + px(r - 1, c) + px(r - 1, c + 1) -
                         px(r + 1, c - 1) - px(r + 1, c) - px(r + 1, c + 1)) /
                        3.0;
      out[static_cast<size_t>(r) * w + c] = std::sqrt(gx * gx + gy * gy);
    }
  return out;
}

std::vector<double> to_double(const Image& img) {
  std::vector<double> out(img.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = img.data()[i];
  return out;
}

} // namespace

double psnr(const Image& ref, const Image& test, double peak) {
  require_same_shape(ref, test, "psnr");
  if (peak <= 0.0)
    throw std::invalid_argument("psnr: peak must be > 0");
  double se = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    const double d = static_cast<double>(ref.data()[i]) - test.data()[i];
    se += d * d;
  }
  const double mse = se / static_cast<double>(ref.size());
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& ref, const Image& test) {
  require_same_shape(ref, test, "ssim");
  const int h = ref.height(), w = ref.width();
  if (h < 11 || w < 11)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  const double c1 = 0.01 * 0.01; // (K1 * peak)^2
  const double c2 = 0.03 * 0.03; // (K2 * peak)^2
  const std::vector<double> kernel = ssim_window();

  const std::vector<double> x = to_double(ref);
  const std::vector<double> y = to_double(test);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }

  const std::vector<double> mu_x = gauss_valid(x, h, w, kernel);
  const std::vector<double> mu_y = gauss_valid(y, h, w, kernel);
  const std::vector<double> m_xx = gauss_valid(xx, h, w, kernel);
  const std::vector<double> m_yy = gauss_valid(yy, h, w, kernel);
  const std::vector<double> m_xy = gauss_valid(xy, h, w, kernel);

  double acc = 0.0;
  for (size_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double cov = m_xy[i] - mu_x[i] * mu_y[i];
    acc += ((2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2)) /
           ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2));
  }
  return acc / static_cast<double>(mu_x.size());
}

double gmsd(const Image& ref, const Image& test) {
  require_same_shape(ref, test, "gmsd");
  const int h = ref.height(), w = ref.width();
  if (h < 4 || w < 4)
    throw std::invalid_argument("gmsd: image must be at least 4x4");

  const double c = 0.0026;

  int oh = 0, ow = 0;
  const std::vector<double> r2 = avg_pool2(to_double(ref), h, w, oh, ow);
  const std::vector<double> t2 = avg_pool2(to_double(test), h, w, oh, ow);
  const std::vector<double> mr = prewitt_magnitude(r2, oh, ow);
  const std::vector<double> mt = prewitt_magnitude(t2, oh, ow);

  const size_t n = mr.size();
  std::vector<double> gms(n);
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    gms[i] = (2.0 * mr[i] * mt[i] + c) / (mr[i] * mr[i] + mt[i] * mt[i] + c);
    mean += gms[i];
  }
  mean /= static_cast<double>(n);

  double var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = gms[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);
  return std::sqrt(var);
}

double spectral_l1(const Image& ref, const Image& test) {
  require_same_shape(ref, test, "spectral_l1");
  const int h = ref.height(), w = ref.width();

  std::vector<std::complex<double>> a(ref.size()), b(ref.size());
  for (size_t i = 0; i < ref.size(); ++i) {
    a[i] = std::complex<double>(ref.data()[i], 0.0);
    b[i] = std::complex<double>(test.data()[i], 0.0);
  }
  fft_2d(a, h, w, false);
  fft_2d(b, h, w, false);

  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    acc += std::fabs(a[i].real() - b[i].real());
    acc += std::fabs(a[i].imag() - b[i].imag());
  }
  return acc / (2.0 * static_cast<double>(ref.size()));
}

MetricReport evaluate_pair(const Image& ref, const Image& test, int margin) {
  require_same_shape(ref, test, "evaluate_pair");
  if (margin < 0)
    throw std::invalid_argument("evaluate_pair: margin must be >= 0");
  const int h = ref.height() - 2 * margin;
  const int w = ref.width() - 2 * margin;
  if (h < 11 || w < 11)
    throw std::invalid_argument("evaluate_pair: margin leaves too little image");

  const Image rc = margin ? ref.crop(margin, margin, h, w) : ref;
  const Image tc = margin ? test.crop(margin, margin, h, w) : test;

  MetricReport report;
  report.psnr_db = psnr(rc, tc);
  report.ssim = ssim(rc, tc);
  report.gmsd = gmsd(rc, tc);
  report.spectral_l1 = spectral_l1(rc, tc);
  report.region = Rect{margin, margin, w, h};
  return report;
}

} // namespace lapsim
