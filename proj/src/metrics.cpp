#include "ebsr/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ebsr {

namespace {

Eigen::VectorXd gaussian_window_1d(int size, double sigma) {
  Eigen::VectorXd g(size);
  const double c = (size - 1) / 2.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return g / g.sum();
}

// Separable "valid" correlation: output is (rows - n + 1) x (cols - n + 1).
Image filter_valid(const Image &img, const Eigen::VectorXd &g) {
  const Eigen::Index n = g.size();
  const Eigen::Index out_rows = img.rows() - n + 1;
  const Eigen::Index out_cols = img.cols() - n + 1;
  Image horizontal = Image::Zero(img.rows(), out_cols);
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      horizontal(r, c) = img.row(r).segment(c, n).dot(g.transpose());
    }
  }
  Image out = Image::Zero(out_rows, out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out.row(r) += g[k] * horizontal.row(r + k);
    }
  }
  return out;
}

} // namespace

double mse(const Image &reference, const Image &estimate) {
  require_same_dims(dims_of(reference), dims_of(estimate), "mse");
  return (reference - estimate).squaredNorm() /
         static_cast<double>(reference.size());
}

double psnr(const Image &reference, const Image &estimate) {
  const double err = mse(reference, estimate);
  if (err == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

double ssim(const Image &reference, const Image &estimate,
            const SsimParams &params) {
  require_same_dims(dims_of(reference), dims_of(estimate), "ssim");
  if (std::min(reference.rows(), reference.cols()) < params.window) {
    throw DimensionError("ssim: image smaller than the " +
                         std::to_string(params.window) + "x" +
                         std::to_string(params.window) + " window");
  }
  const Eigen::VectorXd g = gaussian_window_1d(params.window, params.sigma);
  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);

  const Image mu_x = filter_valid(reference, g);
  const Image mu_y = filter_valid(estimate, g);
  const Image xx = filter_valid(reference.cwiseProduct(reference), g);
  const Image yy = filter_valid(estimate.cwiseProduct(estimate), g);
  const Image xy = filter_valid(reference.cwiseProduct(estimate), g);

  const auto mx = mu_x.array();
  const auto my = mu_y.array();
  const auto var_x = xx.array() - mx.square();
  const auto var_y = yy.array() - my.square();
  const auto cov = xy.array() - mx * my;
  const auto map = ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                   ((mx.square() + my.square() + c1) * (var_x + var_y + c2));
  return map.mean();
}

QualityReport evaluate(const Image &reference, const Image &estimate) {
  QualityReport report;
  report.mse = mse(reference, estimate);
  report.psnr = psnr(reference, estimate);
  report.ssim = ssim(reference, estimate);
  return report;
}

Image shave_border(const Image &img, Eigen::Index margin) {
  if (margin < 0 || 2 * margin >= std::min(img.rows(), img.cols())) {
    throw DimensionError("shave_border: margin " + std::to_string(margin) +
                         " too large for " + std::to_string(img.rows()) + "x" +
                         std::to_string(img.cols()));
  }
  return img.block(margin, margin, img.rows() - 2 * margin,
                   img.cols() - 2 * margin);
}

} // namespace ebsr
