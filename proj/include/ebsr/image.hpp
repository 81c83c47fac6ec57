#ifndef EBSR_IMAGE_HPP
#define EBSR_IMAGE_HPP

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>

namespace ebsr {

/// Dense row-major pixel grid. Row-major storage makes `data()` the
/// lexicographic vector view used by every linear operator.
template <typename Scalar>
using ImageT =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Image = ImageT<double>;
using Vector = VectorT<double>;

struct Dims {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  Eigen::Index size() const { return rows * cols; }
  bool operator==(const Dims &) const = default;
};

template <typename Derived>
inline Dims dims_of(const Eigen::MatrixBase<Derived> &img) {
  return {img.rows(), img.cols()};
}

/// Lexicographic (row-major) vector views over an image's storage.
template <typename Scalar>
inline Eigen::Map<VectorT<Scalar>> as_vector(ImageT<Scalar> &img) {
  return {img.data(), img.size()};
}

template <typename Scalar>
inline Eigen::Map<const VectorT<Scalar>> as_vector(const ImageT<Scalar> &img) {
  return {img.data(), img.size()};
}

template <typename Scalar>
inline Eigen::Map<const ImageT<Scalar>> as_image(const VectorT<Scalar> &v,
                                                 Dims dims) {
  return {v.data(), dims.rows, dims.cols};
}

enum class ColorSpace { RGB, YCbCr };

/// Three equally sized planes tagged with their color space.
struct ColorImage {
  ColorSpace space = ColorSpace::RGB;
  std::array<Image, 3> planes;

  Eigen::Index rows() const { return planes[0].rows(); }
  Eigen::Index cols() const { return planes[0].cols(); }
};

/// Raised when operand shapes disagree or violate an operation's bounds.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dims(Dims a, Dims b, const char *what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " vs " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols) + ")");
  }
}

template <typename Derived>
inline bool all_finite(const Eigen::MatrixBase<Derived> &m) {
  return m.allFinite();
}

} // namespace ebsr

#endif // EBSR_IMAGE_HPP
