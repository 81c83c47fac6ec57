#ifndef EBSR_METRICS_HPP
#define EBSR_METRICS_HPP

#include "ebsr/image.hpp"

#include <limits>

namespace ebsr {

struct QualityReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
};

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

double mse(const Image &reference, const Image &estimate);

/// 10 log10(255^2 / mse); +infinity when the images are identical.
double psnr(const Image &reference, const Image &estimate);

/// Mean SSIM over every fully contained window position (no padding).
double ssim(const Image &reference, const Image &estimate,
            const SsimParams &params = {});

QualityReport evaluate(const Image &reference, const Image &estimate);

/// Removes `margin` pixels from every side.
Image shave_border(const Image &img, Eigen::Index margin);

} // namespace ebsr

#endif // EBSR_METRICS_HPP
