#ifndef EBSR_PRIOR_HPP
#define EBSR_PRIOR_HPP

#include "ebsr/filter_bank.hpp"
#include "ebsr/image.hpp"
#include "ebsr/linear_operator.hpp"

#include <vector>

namespace ebsr {

/// Gamma hyperprior parameters: (a, b) for the latent variances, (a0, b0) for
/// the noise precision.
struct HyperParams {
  double a = 0.0;
  double b = 200.0;
  double a0 = 1.0;
  double b0 = 0.0;

  void validate() const;

  /// Smallest value the variance update can produce: 2b / (1 + 2a).
  double gamma_lower_bound() const { return 2.0 * b / (1.0 + 2.0 * a); }
};

/// Per-filter, per-pixel variances of the scale-mixture experts (pixel^2).
struct LatentVariances {
  std::vector<Image> planes;

  static LatentVariances constant(std::size_t filters, Dims dims, double value);

  std::size_t size() const { return planes.size(); }
  /// Throws unless every plane matches `dims` and every entry >= floor.
  void validate(std::size_t filters, Dims dims, double floor) const;
  std::vector<double> means() const;
};

/// The posterior precision
///   W = tau H^T D^T D H + sum_l K_l^T diag(1 / gamma_l) K_l
/// applied without assembling any matrix.
class PrecisionOperator {
public:
  PrecisionOperator(double tau, const FilterBank &bank,
                    const LatentVariances &gamma, LinearOperator dh);

  Dims dims() const { return dh_.input_dims(); }
  Image apply(const Image &x) const;
  Vector apply(const Vector &x) const;

private:
  double tau_;
  const FilterBank &bank_;
  std::vector<Image> inverse_gamma_;
  LinearOperator dh_;
};

/// One-shot form of PrecisionOperator::apply.
Image precision_apply(const Image &x, double tau, const FilterBank &bank,
                      const LatentVariances &gamma, const LinearOperator &dh);

} // namespace ebsr

#endif // EBSR_PRIOR_HPP
