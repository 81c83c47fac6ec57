#ifndef EBSR_COLOR_HPP
#define EBSR_COLOR_HPP

#include "ebsr/image.hpp"

#include <stdexcept>

namespace ebsr {

class ColorSpaceError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// ITU-R BT.601 full-range (JPEG/JFIF) conversion on the [0, 255] scale.
ColorImage rgb_to_ycbcr(const ColorImage &rgb);
ColorImage ycbcr_to_rgb(const ColorImage &ycc);

} // namespace ebsr

#endif // EBSR_COLOR_HPP
