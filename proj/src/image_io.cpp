#include "ebsr/image_io.hpp"

#include "ebsr/color.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <vector>

namespace ebsr {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> read_all(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(IoErrc::Unreadable, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header tokens are separated by whitespace; '#' starts a comment that
// runs to the end of the line.
struct NetpbmHeader {
  char kind = 0;
  long width = 0;
  long height = 0;
  long maxval = 0;
  std::size_t data_offset = 0;
};

NetpbmHeader parse_netpbm_header(const std::vector<unsigned char> &bytes,
                                 const fs::path &path) {
  NetpbmHeader hdr;
  hdr.kind = static_cast<char>(bytes[1]);
  std::size_t pos = 2;
  auto next_number = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') {
          ++pos;
        }
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size()) {
      throw IoError(IoErrc::Truncated, "truncated header in " + path.string());
    }
    if (!std::isdigit(bytes[pos])) {
      throw IoError(IoErrc::UnsupportedFormat,
                    "malformed header in " + path.string());
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1L << 30)) {
        throw IoError(IoErrc::UnsupportedFormat,
                      "header value too large in " + path.string());
      }
      ++pos;
    }
    return value;
  };
  hdr.width = next_number();
  hdr.height = next_number();
  hdr.maxval = next_number();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw IoError(IoErrc::Truncated, "truncated header in " + path.string());
  }
  hdr.data_offset = pos + 1;
  if (hdr.width < 1 || hdr.height < 1) {
    throw IoError(IoErrc::UnsupportedFormat,
                  "empty image in " + path.string());
  }
  if (hdr.maxval != 255) {
    throw IoError(IoErrc::UnsupportedFormat,
                  "only maxval 255 is supported: " + path.string());
  }
  return hdr;
}

LoadedImage load_netpbm(const std::vector<unsigned char> &bytes,
                        const fs::path &path) {
  const NetpbmHeader hdr = parse_netpbm_header(bytes, path);
  const int channels = hdr.kind == '5' ? 1 : 3;
  const std::size_t needed =
      static_cast<std::size_t>(hdr.width) * hdr.height * channels;
  if (bytes.size() - hdr.data_offset < needed) {
    throw IoError(IoErrc::Truncated, "truncated pixel data in " + path.string());
  }
  const unsigned char *px = bytes.data() + hdr.data_offset;
  if (channels == 1) {
    Image img(hdr.height, hdr.width);
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      img.data()[i] = px[i];
    }
    return img;
  }
  ColorImage img;
  img.space = ColorSpace::RGB;
  for (auto &plane : img.planes) {
    plane.resize(hdr.height, hdr.width);
  }
  for (Eigen::Index i = 0; i < img.planes[0].size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      img.planes[c].data()[i] = px[3 * i + c];
    }
  }
  return img;
}

LoadedImage load_png(const fs::path &path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError(IoErrc::UnsupportedFormat,
                  "cannot decode PNG " + path.string() + ": " + msg);
  }
  const png_uint_32 native = image.format;
  if (native & (PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_ALPHA |
                PNG_FORMAT_FLAG_COLORMAP)) {
    png_image_free(&image);
    throw IoError(IoErrc::UnsupportedFormat,
                  "only 8-bit gray/RGB PNG without alpha or palette: " +
                      path.string());
  }
  const bool color = native & PNG_FORMAT_FLAG_COLOR;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError(IoErrc::Truncated,
                  "cannot read PNG data " + path.string() + ": " + msg);
  }
  const Eigen::Index rows = image.height;
  const Eigen::Index cols = image.width;
  if (!color) {
    Image img(rows, cols);
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      img.data()[i] = buffer[i];
    }
    return img;
  }
  ColorImage img;
  for (auto &plane : img.planes) {
    plane.resize(rows, cols);
  }
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    for (int c = 0; c < 3; ++c) {
      img.planes[c].data()[i] = buffer[3 * i + c];
    }
  }
  return img;
}

std::string lower_extension(const fs::path &path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

fs::path temp_sibling(const fs::path &path) {
  fs::path tmp = path;
  tmp += ".partial";
  return tmp;
}

void commit(const fs::path &tmp, const fs::path &path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(IoErrc::Unwritable, "cannot write " + path.string());
  }
}

void write_bytes(const fs::path &path, const std::string &header,
                 const std::vector<unsigned char> &pixels) {
  const fs::path tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError(IoErrc::Unwritable, "cannot write " + path.string());
    }
    out << header;
    out.write(reinterpret_cast<const char *>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(IoErrc::Unwritable, "cannot write " + path.string());
    }
  }
  commit(tmp, path);
}

void write_png(const fs::path &path, Eigen::Index rows, Eigen::Index cols,
               bool color, const std::vector<unsigned char> &pixels) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(cols);
  image.height = static_cast<png_uint_32>(rows);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const fs::path tmp = temp_sibling(path);
  if (!png_image_write_to_file(&image, tmp.c_str(), 0, pixels.data(), 0,
                               nullptr)) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw IoError(IoErrc::Unwritable, "cannot write " + path.string());
  }
  commit(tmp, path);
}

void require_finite(const Image &plane) {
  if (!plane.allFinite()) {
    throw std::invalid_argument("save_image: non-finite pixel");
  }
}

} // namespace

void write_text_atomic(const fs::path &path, const std::string &text) {
  write_bytes(path, text, {});
}

unsigned char quantize_pixel(double value) {
  const double clamped = std::clamp(value, 0.0, 255.0);
  return static_cast<unsigned char>(std::round(clamped));
}

LoadedImage load_image(const fs::path &path) {
  if (!fs::exists(path)) {
    throw IoError(IoErrc::Unreadable, "no such file: " + path.string());
  }
  const std::vector<unsigned char> bytes = read_all(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return load_netpbm(bytes, path);
  }
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P',  'N',  'G',
                                                 '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, bytes.begin())) {
    return load_png(path);
  }
  if (bytes.size() < 2) {
    throw IoError(IoErrc::Truncated, "empty or truncated file: " + path.string());
  }
  throw IoError(IoErrc::UnsupportedFormat,
                "unsupported image format: " + path.string());
}

Image load_gray(const fs::path &path) {
  LoadedImage loaded = load_image(path);
  if (auto *gray = std::get_if<Image>(&loaded)) {
    return std::move(*gray);
  }
  return rgb_to_ycbcr(std::get<ColorImage>(loaded)).planes[0];
}

void save_image(const Image &img, const fs::path &path) {
  require_finite(img);
  std::vector<unsigned char> pixels(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    pixels[i] = quantize_pixel(img.data()[i]);
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, img.rows(), img.cols(), false, pixels);
  } else if (ext == ".pgm") {
    write_bytes(path,
                "P5\n" + std::to_string(img.cols()) + " " +
                    std::to_string(img.rows()) + "\n255\n",
                pixels);
  } else {
    throw IoError(IoErrc::UnsupportedFormat,
                  "grayscale output must be .pgm or .png: " + path.string());
  }
}

void save_image(const ColorImage &img, const fs::path &path) {
  const ColorImage rgb =
      img.space == ColorSpace::RGB ? img : ycbcr_to_rgb(img);
  for (const auto &plane : rgb.planes) {
    require_finite(plane);
  }
  const Eigen::Index n = rgb.planes[0].size();
  std::vector<unsigned char> pixels(static_cast<std::size_t>(3 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      pixels[3 * i + c] = quantize_pixel(rgb.planes[c].data()[i]);
    }
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, rgb.rows(), rgb.cols(), true, pixels);
  } else if (ext == ".ppm") {
    write_bytes(path,
                "P6\n" + std::to_string(rgb.cols()) + " " +
                    std::to_string(rgb.rows()) + "\n255\n",
                pixels);
  } else {
    throw IoError(IoErrc::UnsupportedFormat,
                  "color output must be .ppm or .png: " + path.string());
  }
}

} // namespace ebsr
