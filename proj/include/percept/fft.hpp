#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "percept/image.hpp"

namespace percept {

// In-place iterative radix-2 transform; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

// Spectral same-size correlation against a reflect-101-padded plane.
// Matches convolve2d (which does not flip the kernel) to ~1e-10, at
// O(N log N) so the wide Gabor kernels stay affordable.
class FftCorrelator {
 public:
  // pad_radius must be >= the largest kernel radius that will be applied
  FftCorrelator(const FloatPlane& plane, int pad_radius);

  // Runs the even (kre) and odd (kim) parts in one complex pass.
  // Returns {real response, imaginary response}, each same-size as the input.
  std::pair<FloatPlane, FloatPlane> correlate(const Kernel& kre, const Kernel& kim) const;

 private:
  int width_, height_, pad_;
  int fft_w_, fft_h_;
  std::vector<std::complex<double>> spectrum_;  // row-major fft_h_ x fft_w_
};

}  // namespace percept
