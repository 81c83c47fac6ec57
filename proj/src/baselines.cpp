#include "ebsr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ebsr {

namespace {

void check_scale(int scale) {
  if (scale < 1) {
    throw std::invalid_argument("scale must be >= 1");
  }
}

struct Taps {
  Eigen::Index index[4];
  double weight[4];
};

// Interpolation taps for every output position along one axis.
std::vector<Taps> axis_taps(Eigen::Index n, int scale) {
  std::vector<Taps> taps(static_cast<std::size_t>(n * scale));
  for (Eigen::Index o = 0; o < n * scale; ++o) {
    const double src = (static_cast<double>(o) + 0.5) / scale - 0.5;
    const double base = std::floor(src);
    const double frac = src - base;
    Taps &t = taps[static_cast<std::size_t>(o)];
    for (int m = 0; m < 4; ++m) {
      const Eigen::Index idx = static_cast<Eigen::Index>(base) + m - 1;
      t.index[m] = std::clamp<Eigen::Index>(idx, 0, n - 1);
      t.weight[m] = keys_weight(frac - (m - 1));
    }
  }
  return taps;
}

} // namespace

double keys_weight(double t, double a) {
  const double x = std::abs(t);
  if (x <= 1.0) {
    return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  }
  if (x < 2.0) {
    return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  }
  return 0.0;
}

Image nearest_neighbor_upscale(const Image &img, int scale) {
  check_scale(scale);
  Image out(img.rows() * scale, img.cols() * scale);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = img(i / scale, j / scale);
    }
  }
  return out;
}

Image bicubic_upscale(const Image &img, int scale) {
  check_scale(scale);
  if (img.rows() < 4 || img.cols() < 4) {
    throw DimensionError("bicubic_upscale needs at least 4x4 input, got " +
                         std::to_string(img.rows()) + "x" +
                         std::to_string(img.cols()));
  }
  const auto col_taps = axis_taps(img.cols(), scale);
  Image horizontal(img.rows(), img.cols() * scale);
  for (Eigen::Index j = 0; j < horizontal.cols(); ++j) {
    const Taps &t = col_taps[static_cast<std::size_t>(j)];
    horizontal.col(j) = t.weight[0] * img.col(t.index[0]) +
                        t.weight[1] * img.col(t.index[1]) +
                        t.weight[2] * img.col(t.index[2]) +
                        t.weight[3] * img.col(t.index[3]);
  }
  const auto row_taps = axis_taps(img.rows(), scale);
  Image out(img.rows() * scale, horizontal.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Taps &t = row_taps[static_cast<std::size_t>(i)];
    out.row(i) = t.weight[0] * horizontal.row(t.index[0]) +
                 t.weight[1] * horizontal.row(t.index[1]) +
                 t.weight[2] * horizontal.row(t.index[2]) +
                 t.weight[3] * horizontal.row(t.index[3]);
  }
  return out;
}

const std::vector<std::string> &baseline_methods() {
  static const std::vector<std::string> methods{"nn", "bicubic"};
  return methods;
}

Image baseline_upscale(const std::string &method, const Image &img, int scale) {
  if (method == "bicubic") {
    return bicubic_upscale(img, scale);
  }
  if (method == "nn") {
    return nearest_neighbor_upscale(img, scale);
  }
  throw std::invalid_argument("unknown baseline method '" + method + "'");
}

} // namespace ebsr
