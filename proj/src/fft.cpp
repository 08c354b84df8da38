#include "percept/fft.hpp"

#include <cmath>

#include "percept/error.hpp"

namespace percept {

namespace {

constexpr double kPi = 3.14159265358979323846;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft2_inplace(std::vector<std::complex<double>>& data, int w, int h, bool inverse) {
  std::vector<std::complex<double>> line(std::max(w, h));
  for (int y = 0; y < h; ++y) {
    line.assign(data.begin() + static_cast<size_t>(y) * w,
                data.begin() + static_cast<size_t>(y + 1) * w);
    fft_inplace(line, inverse);
    std::copy(line.begin(), line.end(), data.begin() + static_cast<size_t>(y) * w);
  }
  for (int x = 0; x < w; ++x) {
    line.resize(h);
    for (int y = 0; y < h; ++y) line[y] = data[static_cast<size_t>(y) * w + x];
    fft_inplace(line, inverse);
    for (int y = 0; y < h; ++y) data[static_cast<size_t>(y) * w + x] = line[y];
  }
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  const size_t n = data.size();
  require((n & (n - 1)) == 0 && n > 0, Errc::bad_config, "FFT size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const auto u = data[i + k];
        const auto v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= inv;
  }
}

FftCorrelator::FftCorrelator(const FloatPlane& plane, int pad_radius)
    : width_(plane.width), height_(plane.height), pad_(pad_radius) {
  require(plane.width > 0 && plane.height > 0, Errc::bad_config, "empty plane");
  const int ext_w = width_ + 2 * pad_;
  const int ext_h = height_ + 2 * pad_;
  fft_w_ = next_pow2(ext_w);
  fft_h_ = next_pow2(ext_h);
  spectrum_.assign(static_cast<size_t>(fft_w_) * fft_h_, {0.0, 0.0});
  for (int y = 0; y < ext_h; ++y) {
    const int sy = reflect101(y - pad_, height_);
    for (int x = 0; x < ext_w; ++x) {
      const int sx = reflect101(x - pad_, width_);
      spectrum_[static_cast<size_t>(y) * fft_w_ + x] = plane.at(sx, sy);
    }
  }
  fft2_inplace(spectrum_, fft_w_, fft_h_, false);
}

std::pair<FloatPlane, FloatPlane> FftCorrelator::correlate(const Kernel& kre,
                                                           const Kernel& kim) const {
  require(kre.width == kim.width && kre.height == kim.height, Errc::dim_mismatch,
          "even/odd kernel shapes differ");
  require(kre.width % 2 == 1 && kre.height % 2 == 1, Errc::even_kernel,
          "kernel sides must be odd");
  const int rx = kre.width / 2;
  const int ry = kre.height / 2;
  require(rx <= pad_ && ry <= pad_, Errc::bad_config, "kernel exceeds pad radius");

  // conj(FFT(kre - i*kim)) carries both correlations in one pass
  std::vector<std::complex<double>> g(static_cast<size_t>(fft_w_) * fft_h_, {0.0, 0.0});
  for (int y = 0; y < kre.height; ++y)
    for (int x = 0; x < kre.width; ++x)
      g[static_cast<size_t>(y) * fft_w_ + x] = {kre.at(x, y), -kim.at(x, y)};
  fft2_inplace(g, fft_w_, fft_h_, false);
  for (size_t i = 0; i < g.size(); ++i) g[i] = spectrum_[i] * std::conj(g[i]);
  fft2_inplace(g, fft_w_, fft_h_, true);

  FloatPlane out_re(width_, height_);
  FloatPlane out_im(width_, height_);
  const int off = pad_ - rx;
  const int off_y = pad_ - ry;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const auto v = g[static_cast<size_t>(y + off_y) * fft_w_ + (x + off)];
      out_re.at(x, y) = v.real();
      out_im.at(x, y) = v.imag();
    }
  }
  return {std::move(out_re), std::move(out_im)};
}

}  // namespace percept
