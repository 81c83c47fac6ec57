#ifndef EBSR_CONVOLUTION_HPP
#define EBSR_CONVOLUTION_HPP

#include "ebsr/image.hpp"
#include "ebsr/kernel.hpp"

#include <string>

namespace ebsr {

namespace detail {

inline void require_kernel_fits(Dims img, const Kernel2D &k, const char *what) {
  if (k.rows() > img.rows || k.cols() > img.cols) {
    throw DimensionError(std::string(what) + ": kernel " +
                         std::to_string(k.rows()) + "x" +
                         std::to_string(k.cols()) + " larger than image " +
                         std::to_string(img.rows) + "x" +
                         std::to_string(img.cols));
  }
}

inline Eigen::Index wrap(Eigen::Index i, Eigen::Index n) {
  const Eigen::Index m = i % n;
  return m < 0 ? m + n : m;
}

/// out(i, j) += w * x((i - dr) mod R, (j - dc) mod C), as at most four block
/// updates.
template <typename Out, typename In, typename Scalar>
void add_shifted(Out &out, const In &x, Eigen::Index dr, Eigen::Index dc,
                 Scalar w) {
  const Eigen::Index rows = x.rows();
  const Eigen::Index cols = x.cols();
  const Eigen::Index sr = wrap(dr, rows);
  const Eigen::Index sc = wrap(dc, cols);
  // Destination rows [sr, rows) read source rows [0, rows - sr), and
  // destination rows [0, sr) read source rows [rows - sr, rows).
  const Eigen::Index row_len[2] = {rows - sr, sr};
  const Eigen::Index row_dst[2] = {sr, 0};
  const Eigen::Index row_src[2] = {0, rows - sr};
  const Eigen::Index col_len[2] = {cols - sc, sc};
  const Eigen::Index col_dst[2] = {sc, 0};
  const Eigen::Index col_src[2] = {0, cols - sc};
  for (int a = 0; a < 2; ++a) {
    if (row_len[a] == 0) {
      continue;
    }
    for (int b = 0; b < 2; ++b) {
      if (col_len[b] == 0) {
        continue;
      }
      out.block(row_dst[a], col_dst[b], row_len[a], col_len[b]) +=
          w * x.block(row_src[a], col_src[b], row_len[a], col_len[b]);
    }
  }
}

} // namespace detail

/// Circular 2-D convolution, center anchored:
///   out(p) = sum_a k(a) x(p - a + anchor)  (indices mod image size).
/// Output has the input's dimensions.
template <typename Derived>
ImageT<typename Derived::Scalar>
conv2_circular(const Eigen::MatrixBase<Derived> &img, const Kernel2D &k) {
  using Scalar = typename Derived::Scalar;
  detail::require_kernel_fits(dims_of(img), k, "conv2_circular");
  const ImageT<Scalar> x = img;
  ImageT<Scalar> out = ImageT<Scalar>::Zero(x.rows(), x.cols());
  for (Eigen::Index a = 0; a < k.rows(); ++a) {
    for (Eigen::Index b = 0; b < k.cols(); ++b) {
      const double w = k.taps()(a, b);
      if (w == 0.0) {
        continue;
      }
      detail::add_shifted(out, x, a - k.anchor_row(), b - k.anchor_col(),
                          static_cast<Scalar>(w));
    }
  }
  return out;
}

/// Transpose of conv2_circular: convolution with the 180-degree rotated kernel.
template <typename Derived>
ImageT<typename Derived::Scalar>
conv2_adjoint(const Eigen::MatrixBase<Derived> &img, const Kernel2D &k) {
  detail::require_kernel_fits(dims_of(img), k, "conv2_adjoint");
  return conv2_circular(img, k.flipped());
}

/// Frequency-domain evaluation of conv2_circular.
Image fft_conv2(const Image &img, const Kernel2D &k);

/// Kernel area times image area above which conv2 switches to the FFT path.
inline constexpr double kFftCrossover = 1 << 21;

/// conv2_circular or fft_conv2, whichever is cheaper for the operand sizes.
Image conv2(const Image &img, const Kernel2D &k);
Image conv2_transposed(const Image &img, const Kernel2D &k);

} // namespace ebsr

#endif // EBSR_CONVOLUTION_HPP
