#ifndef EBSR_KERNEL_HPP
#define EBSR_KERNEL_HPP

#include "ebsr/image.hpp"

#include <stdexcept>

namespace ebsr {

class KernelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Small odd-sized stencil anchored at its center tap.
class Kernel2D {
public:
  Kernel2D() : taps_(Image::Ones(1, 1)) {}
  explicit Kernel2D(Image taps);

  const Image &taps() const { return taps_; }
  Eigen::Index rows() const { return taps_.rows(); }
  Eigen::Index cols() const { return taps_.cols(); }
  Eigen::Index anchor_row() const { return taps_.rows() / 2; }
  Eigen::Index anchor_col() const { return taps_.cols() / 2; }

  /// Rotation by 180 degrees, fliplr(flipud(k)).
  Kernel2D flipped() const;
  /// Element-wise square of the taps.
  Kernel2D squared() const;
  /// Embeds the taps, centered, in a larger odd-sized zero stencil.
  Kernel2D padded(Eigen::Index rows, Eigen::Index cols) const;

  double sum() const { return taps_.sum(); }
  double norm() const { return taps_.norm(); }

  bool operator==(const Kernel2D &other) const {
    return taps_.rows() == other.taps_.rows() &&
           taps_.cols() == other.taps_.cols() && taps_ == other.taps_;
  }

private:
  Image taps_;
};

Kernel2D identity_kernel();

/// Isotropic Gaussian sampled at integer offsets, normalized to unit sum.
Kernel2D gaussian_kernel(double stddev, int size);

/// Blur for zoom factor r: std = 2r/3, size = 2 ceil(1.5 std) + 1
/// (std 2, size 7 at r = 3).
double blur_std_for_scale(int scale);
int blur_size_for_std(double stddev);
Kernel2D blur_kernel_for_scale(int scale);

} // namespace ebsr

#endif // EBSR_KERNEL_HPP
