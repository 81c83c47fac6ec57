#ifndef EBSR_IMAGE_IO_HPP
#define EBSR_IMAGE_IO_HPP

#include "ebsr/image.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

namespace ebsr {

enum class IoErrc {
  Unreadable,
  UnsupportedFormat,
  Truncated,
  Unwritable,
};

class IoError : public std::runtime_error {
public:
  IoError(IoErrc code, const std::string &msg)
      : std::runtime_error(msg), code_(code) {}
  IoErrc code() const { return code_; }

private:
  IoErrc code_;
};

using LoadedImage = std::variant<Image, ColorImage>;

/// Reads binary PGM (P5), PPM (P6) with maxval 255, or 8-bit gray/RGB PNG.
/// Color images come back tagged RGB; pixels are reals in [0, 255].
LoadedImage load_image(const std::filesystem::path &path);

/// Convenience wrapper; color input is reduced to BT.601 luma.
Image load_gray(const std::filesystem::path &path);

/// Format is chosen from the extension: .pgm/.ppm/.png. Pixels are clamped to
/// [0, 255] and rounded half away from zero. The file appears atomically: data
/// goes to a sibling temp file that is renamed on success.
void save_image(const Image &img, const std::filesystem::path &path);
void save_image(const ColorImage &img, const std::filesystem::path &path);

/// Writes text through the same temp-file-and-rename path as save_image.
void write_text_atomic(const std::filesystem::path &path,
                       const std::string &text);

/// The 8-bit value a pixel is stored as.
unsigned char quantize_pixel(double value);

} // namespace ebsr

#endif // EBSR_IMAGE_IO_HPP
