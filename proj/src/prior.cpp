#include "ebsr/prior.hpp"

#include "ebsr/convolution.hpp"
#include "ebsr/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ebsr {

void HyperParams::validate() const {
  if (!(a >= 0.0 && b >= 0.0 && a0 >= 0.0 && b0 >= 0.0)) {
    throw std::invalid_argument("hyperparameters must be non-negative");
  }
}

LatentVariances LatentVariances::constant(std::size_t filters, Dims dims,
                                          double value) {
  LatentVariances g;
  g.planes.assign(filters, Image::Constant(dims.rows, dims.cols, value));
  return g;
}

void LatentVariances::validate(std::size_t filters, Dims dims,
                               double floor) const {
  if (planes.size() != filters) {
    throw DimensionError("latent variances: expected " +
                         std::to_string(filters) + " planes, got " +
                         std::to_string(planes.size()));
  }
  for (const auto &p : planes) {
    require_same_dims(dims_of(p), dims, "latent variances");
    if (!(p.minCoeff() >= floor)) {
      throw std::invalid_argument("latent variances below floor");
    }
  }
}

std::vector<double> LatentVariances::means() const {
  std::vector<double> out;
  out.reserve(planes.size());
  for (const auto &p : planes) {
    out.push_back(p.mean());
  }
  return out;
}

PrecisionOperator::PrecisionOperator(double tau, const FilterBank &bank,
                                     const LatentVariances &gamma,
                                     LinearOperator dh)
    : tau_(tau), bank_(bank), dh_(std::move(dh)) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("precision: tau must be positive");
  }
  gamma.validate(bank.size(), dh_.input_dims(), 0.0);
  inverse_gamma_.reserve(gamma.size());
  for (const auto &g : gamma.planes) {
    if (!(g.minCoeff() > 0.0)) {
      throw std::invalid_argument("precision: gamma must be positive");
    }
    inverse_gamma_.push_back(g.cwiseInverse());
  }
}

Image PrecisionOperator::apply(const Image &x) const {
  require_same_dims(dims_of(x), dims(), "precision_apply");
  std::vector<Image> terms(bank_.size());
  parallel_for(bank_.size(), [&](std::size_t l) {
    const Kernel2D &k = bank_.filters[l];
    terms[l] =
        conv2_adjoint(inverse_gamma_[l].cwiseProduct(conv2_circular(x, k)), k);
  });
  Image out = tau_ * dh_.apply_adjoint(dh_.apply(x));
  for (const auto &t : terms) {
    out += t;
  }
  return out;
}

Vector PrecisionOperator::apply(const Vector &x) const {
  return as_vector(apply(Image(as_image(x, dims()))));
}

Image precision_apply(const Image &x, double tau, const FilterBank &bank,
                      const LatentVariances &gamma, const LinearOperator &dh) {
  return PrecisionOperator(tau, bank, gamma, dh).apply(x);
}

} // namespace ebsr
