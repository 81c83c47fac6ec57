#include "ebsr/kernel.hpp"

#include <cmath>
#include <string>

namespace ebsr {

Kernel2D::Kernel2D(Image taps) : taps_(std::move(taps)) {
  if (taps_.rows() < 1 || taps_.cols() < 1 || taps_.rows() % 2 == 0 ||
      taps_.cols() % 2 == 0) {
    throw KernelError("kernel dimensions must be odd and positive, got " +
                      std::to_string(taps_.rows()) + "x" +
                      std::to_string(taps_.cols()));
  }
  if (!taps_.allFinite()) {
    throw KernelError("kernel taps must be finite");
  }
}

Kernel2D Kernel2D::flipped() const {
  return Kernel2D(taps_.reverse());
}

Kernel2D Kernel2D::squared() const {
  return Kernel2D(taps_.cwiseAbs2());
}

Kernel2D Kernel2D::padded(Eigen::Index rows, Eigen::Index cols) const {
  if (rows < taps_.rows() || cols < taps_.cols() || rows % 2 == 0 ||
      cols % 2 == 0) {
    throw KernelError("padded: target must be odd and no smaller than kernel");
  }
  Image out = Image::Zero(rows, cols);
  out.block((rows - taps_.rows()) / 2, (cols - taps_.cols()) / 2, taps_.rows(),
            taps_.cols()) = taps_;
  return Kernel2D(std::move(out));
}

Kernel2D identity_kernel() { return Kernel2D(Image::Ones(1, 1)); }

Kernel2D gaussian_kernel(double stddev, int size) {
  if (!(stddev > 0.0) || !std::isfinite(stddev)) {
    throw KernelError("gaussian_kernel: std must be positive");
  }
  if (size < 1 || size % 2 == 0) {
    throw KernelError("gaussian_kernel: size must be odd and >= 1");
  }
  const int c = size / 2;
  Image taps(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double d2 = double(i - c) * (i - c) + double(j - c) * (j - c);
      taps(i, j) = std::exp(-d2 / (2.0 * stddev * stddev));
    }
  }
  taps /= taps.sum();
  return Kernel2D(std::move(taps));
}

double blur_std_for_scale(int scale) {
  if (scale < 1) {
    throw KernelError("scale must be >= 1");
  }
  return 2.0 * scale / 3.0;
}

int blur_size_for_std(double stddev) {
  // Half-width 1.5 std; the slack keeps 1.5 * (2r/3) == r exact.
  return 2 * static_cast<int>(std::ceil(1.5 * stddev - 1e-9)) + 1;
}

Kernel2D blur_kernel_for_scale(int scale) {
  const double stddev = blur_std_for_scale(scale);
  return gaussian_kernel(stddev, blur_size_for_std(stddev));
}

} // namespace ebsr
