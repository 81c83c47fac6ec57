#include "ebsr/linear_operator.hpp"

namespace ebsr {

namespace {

Vector flatten(const Image &img) { return as_vector(img); }

} // namespace

LinearOperator identity_operator(Dims dims) {
  auto id = [](const Vector &x) { return x; };
  return {dims, dims, id, id};
}

LinearOperator convolution_operator(const Kernel2D &k, Dims dims) {
  detail::require_kernel_fits(dims, k, "convolution_operator");
  return {dims, dims,
          [k, dims](const Vector &x) {
            return flatten(conv2_circular(as_image(x, dims), k));
          },
          [k, dims](const Vector &y) {
            return flatten(conv2_adjoint(as_image(y, dims), k));
          }};
}

LinearOperator decimation_operator(const DecimationSpec &spec, Dims hr) {
  spec.require_divisible(hr);
  const Dims lr = spec.low_res_dims(hr);
  return {hr, lr,
          [spec, hr](const Vector &x) {
            return flatten(downsample(as_image(x, hr), spec));
          },
          [spec, hr, lr](const Vector &y) {
            return flatten(upsample_zero(as_image(y, lr), spec, hr));
          }};
}

LinearOperator compose(const LinearOperator &outer,
                       const LinearOperator &inner) {
  if (!(outer.input_dims() == inner.output_dims())) {
    throw DimensionError("compose: inner output does not match outer input");
  }
  return {inner.input_dims(), outer.output_dims(),
          [outer, inner](const Vector &x) {
            return outer.apply(inner.apply(x));
          },
          [outer, inner](const Vector &y) {
            return inner.apply_adjoint(outer.apply_adjoint(y));
          }};
}

Image blur_decimate(const Image &x, const Kernel2D &h,
                    const DecimationSpec &spec) {
  const Dims hr = dims_of(x);
  detail::require_kernel_fits(hr, h, "blur_decimate");
  spec.require_divisible(hr);
  const Dims lr = spec.low_res_dims(hr);
  Image out = Image::Zero(lr.rows, lr.cols);
  for (Eigen::Index i = 0; i < lr.rows; ++i) {
    const Eigen::Index pr = spec.factor * i + spec.row_phase;
    for (Eigen::Index j = 0; j < lr.cols; ++j) {
      const Eigen::Index pc = spec.factor * j + spec.col_phase;
      double acc = 0.0;
      for (Eigen::Index a = 0; a < h.rows(); ++a) {
        const Eigen::Index sr = detail::wrap(pr - a + h.anchor_row(), hr.rows);
        for (Eigen::Index b = 0; b < h.cols(); ++b) {
          acc += h.taps()(a, b) *
                 x(sr, detail::wrap(pc - b + h.anchor_col(), hr.cols));
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Image blur_decimate_adjoint(const Image &y, const Kernel2D &h,
                            const DecimationSpec &spec, Dims hr) {
  detail::require_kernel_fits(hr, h, "blur_decimate_adjoint");
  spec.require_divisible(hr);
  require_same_dims(dims_of(y), spec.low_res_dims(hr), "blur_decimate_adjoint");
  Image out = Image::Zero(hr.rows, hr.cols);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const Eigen::Index pr = spec.factor * i + spec.row_phase;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const Eigen::Index pc = spec.factor * j + spec.col_phase;
      const double v = y(i, j);
      for (Eigen::Index a = 0; a < h.rows(); ++a) {
        const Eigen::Index sr = detail::wrap(pr - a + h.anchor_row(), hr.rows);
        for (Eigen::Index b = 0; b < h.cols(); ++b) {
          out(sr, detail::wrap(pc - b + h.anchor_col(), hr.cols)) +=
              h.taps()(a, b) * v;
        }
      }
    }
  }
  return out;
}

LinearOperator compose_dh(const Kernel2D &h, const DecimationSpec &spec,
                          Dims hr) {
  detail::require_kernel_fits(hr, h, "compose_dh");
  spec.require_divisible(hr);
  const Dims lr = spec.low_res_dims(hr);
  return {hr, lr,
          [h, spec, hr](const Vector &x) {
            return flatten(blur_decimate(as_image(x, hr), h, spec));
          },
          [h, spec, hr, lr](const Vector &y) {
            return flatten(blur_decimate_adjoint(as_image(y, lr), h, spec, hr));
          }};
}

double adjoint_mismatch(const LinearOperator &op, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal;
  Vector x(op.input_size());
  Vector y(op.output_size());
  for (auto &v : x) {
    v = normal(rng);
  }
  for (auto &v : y) {
    v = normal(rng);
  }
  const double lhs = op.apply(x).dot(y);
  const double rhs = x.dot(op.apply_adjoint(y));
  return std::abs(lhs - rhs) / (x.norm() * y.norm());
}

} // namespace ebsr
