#ifndef EBSR_DECIMATION_HPP
#define EBSR_DECIMATION_HPP

#include "ebsr/image.hpp"

#include <string>

namespace ebsr {

/// Keeps every `factor`-th row and column starting at the phase offsets.
struct DecimationSpec {
  int factor = 1;
  int row_phase = 0;
  int col_phase = 0;

  void validate() const {
    if (factor < 1) {
      throw DimensionError("decimation factor must be >= 1");
    }
    if (row_phase < 0 || row_phase >= factor || col_phase < 0 ||
        col_phase >= factor) {
      throw DimensionError("decimation phase must lie in [0, factor)");
    }
  }

  /// ceil((dim - phase) / factor) per axis.
  Dims low_res_dims(Dims hr) const {
    validate();
    auto count = [&](Eigen::Index n, int phase) -> Eigen::Index {
      return n > phase ? (n - phase + factor - 1) / factor : 0;
    };
    return {count(hr.rows, row_phase), count(hr.cols, col_phase)};
  }

  /// Throws unless both HR dims are exact multiples of the factor.
  void require_divisible(Dims hr) const {
    if (hr.rows % factor != 0 || hr.cols % factor != 0) {
      throw DimensionError("HR dims " + std::to_string(hr.rows) + "x" +
                           std::to_string(hr.cols) +
                           " not divisible by factor " +
                           std::to_string(factor));
    }
  }
};

template <typename Derived>
ImageT<typename Derived::Scalar>
downsample(const Eigen::MatrixBase<Derived> &img, const DecimationSpec &spec,
           bool strict = true) {
  using Scalar = typename Derived::Scalar;
  const Dims hr = dims_of(img);
  if (strict) {
    spec.require_divisible(hr);
  }
  const Dims lr = spec.low_res_dims(hr);
  ImageT<Scalar> out(lr.rows, lr.cols);
  for (Eigen::Index i = 0; i < lr.rows; ++i) {
    for (Eigen::Index j = 0; j < lr.cols; ++j) {
      out(i, j) = img(spec.factor * i + spec.row_phase,
                      spec.factor * j + spec.col_phase);
    }
  }
  return out;
}

/// Exact adjoint of downsample: scatters onto the lattice, zeros elsewhere.
template <typename Derived>
ImageT<typename Derived::Scalar>
upsample_zero(const Eigen::MatrixBase<Derived> &img, const DecimationSpec &spec,
              Dims hr, bool strict = true) {
  using Scalar = typename Derived::Scalar;
  if (strict) {
    spec.require_divisible(hr);
  }
  require_same_dims(dims_of(img), spec.low_res_dims(hr), "upsample_zero");
  ImageT<Scalar> out = ImageT<Scalar>::Zero(hr.rows, hr.cols);
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      out(spec.factor * i + spec.row_phase, spec.factor * j + spec.col_phase) =
          img(i, j);
    }
  }
  return out;
}

/// 0/1 plane m with diag(m) = D^T D.
inline Image decimation_mask(const DecimationSpec &spec, Dims hr,
                             bool strict = true) {
  const Dims lr = spec.low_res_dims(hr);
  return upsample_zero(Image::Ones(lr.rows, lr.cols), spec, hr, strict);
}

} // namespace ebsr

#endif // EBSR_DECIMATION_HPP
