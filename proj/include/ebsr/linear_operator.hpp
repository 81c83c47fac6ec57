#ifndef EBSR_LINEAR_OPERATOR_HPP
#define EBSR_LINEAR_OPERATOR_HPP

#include "ebsr/convolution.hpp"
#include "ebsr/decimation.hpp"
#include "ebsr/image.hpp"
#include "ebsr/kernel.hpp"

#include <functional>
#include <random>

namespace ebsr {

/// Matrix-free linear map between lexicographic image vectors, carried
/// together with its transpose. Immutable once built; safe to share.
class LinearOperator {
public:
  using Map = std::function<Vector(const Vector &)>;

  LinearOperator(Dims input, Dims output, Map forward, Map adjoint)
      : input_(input), output_(output), forward_(std::move(forward)),
        adjoint_(std::move(adjoint)) {}

  Dims input_dims() const { return input_; }
  Dims output_dims() const { return output_; }
  Eigen::Index input_size() const { return input_.size(); }
  Eigen::Index output_size() const { return output_.size(); }

  Vector apply(const Vector &x) const {
    check(x, input_, "apply");
    return forward_(x);
  }
  Vector apply_adjoint(const Vector &y) const {
    check(y, output_, "apply_adjoint");
    return adjoint_(y);
  }

  Image apply(const Image &x) const {
    require_same_dims(dims_of(x), input_, "LinearOperator::apply");
    return as_image(apply(Vector(as_vector(x))), output_);
  }
  Image apply_adjoint(const Image &y) const {
    require_same_dims(dims_of(y), output_, "LinearOperator::apply_adjoint");
    return as_image(apply_adjoint(Vector(as_vector(y))), input_);
  }

  LinearOperator transposed() const {
    return {output_, input_, adjoint_, forward_};
  }

private:
  static void check(const Vector &v, Dims d, const char *what) {
    if (v.size() != d.size()) {
      throw DimensionError(std::string("LinearOperator::") + what +
                           ": vector length " + std::to_string(v.size()) +
                           " != " + std::to_string(d.size()));
    }
  }

  Dims input_;
  Dims output_;
  Map forward_;
  Map adjoint_;
};

LinearOperator identity_operator(Dims dims);
LinearOperator convolution_operator(const Kernel2D &k, Dims dims);
LinearOperator decimation_operator(const DecimationSpec &spec, Dims hr);

/// outer(inner(x)); adjoint is inner^T(outer^T(y)).
LinearOperator compose(const LinearOperator &outer,
                       const LinearOperator &inner);

/// Blur followed by decimation, y = D H x. Only lattice samples of the blur
/// are evaluated.
LinearOperator compose_dh(const Kernel2D &h, const DecimationSpec &spec,
                          Dims hr);

/// D H x evaluated directly on the sampling lattice.
Image blur_decimate(const Image &x, const Kernel2D &h,
                    const DecimationSpec &spec);
/// H^T D^T y: scatters each LR sample through the flipped kernel.
Image blur_decimate_adjoint(const Image &y, const Kernel2D &h,
                            const DecimationSpec &spec, Dims hr);

/// |<A x, y> - <x, A^T y>| / (|x| |y|) for one random pair.
double adjoint_mismatch(const LinearOperator &op, std::mt19937_64 &rng);

} // namespace ebsr

#endif // EBSR_LINEAR_OPERATOR_HPP
