#include "ebsr/color.hpp"

#include <Eigen/LU>

namespace ebsr {

namespace {

void require_space(const ColorImage &img, ColorSpace expected,
                   const char *what) {
  if (img.space != expected) {
    throw ColorSpaceError(std::string(what) + ": wrong color-space tag");
  }
  for (const auto &plane : img.planes) {
    require_same_dims(dims_of(plane), dims_of(img.planes[0]), what);
  }
}

} // namespace

ColorImage rgb_to_ycbcr(const ColorImage &rgb) {
  require_space(rgb, ColorSpace::RGB, "rgb_to_ycbcr");
  const auto &r = rgb.planes[0].array();
  const auto &g = rgb.planes[1].array();
  const auto &b = rgb.planes[2].array();
  ColorImage out;
  out.space = ColorSpace::YCbCr;
  out.planes[0] = (0.299 * r + 0.587 * g + 0.114 * b).matrix();
  out.planes[1] = (128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b).matrix();
  out.planes[2] = (128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b).matrix();
  return out;
}

ColorImage ycbcr_to_rgb(const ColorImage &ycc) {
  require_space(ycc, ColorSpace::YCbCr, "ycbcr_to_rgb");
  // Exact inverse of the forward matrix above (not the rounded 1.402/0.344136
  // textbook constants) so the round trip closes to machine precision.
  static const Eigen::Matrix3d inverse = [] {
    Eigen::Matrix3d fwd;
    fwd << 0.299, 0.587, 0.114, -0.168736, -0.331264, 0.5, 0.5, -0.418688,
        -0.081312;
    return Eigen::Matrix3d(fwd.inverse());
  }();
  const auto y = ycc.planes[0].array();
  const auto cb = ycc.planes[1].array() - 128.0;
  const auto cr = ycc.planes[2].array() - 128.0;
  ColorImage out;
  out.space = ColorSpace::RGB;
  for (int c = 0; c < 3; ++c) {
    out.planes[c] = (inverse(c, 0) * y + inverse(c, 1) * cb +
                     inverse(c, 2) * cr)
                        .matrix();
  }
  return out;
}

} // namespace ebsr
