#ifndef EBSR_SOLVER_HPP
#define EBSR_SOLVER_HPP

#include "ebsr/cg.hpp"
#include "ebsr/decimation.hpp"
#include "ebsr/filter_bank.hpp"
#include "ebsr/image.hpp"
#include "ebsr/kernel.hpp"
#include "ebsr/linear_operator.hpp"
#include "ebsr/prior.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ebsr {

/// Coefficient of the trace term w in the noise-precision update as it is
/// usually printed: tau = (n/2 + a0) / (|r|^2 / 2 + 2 w + b0).
inline constexpr double kPrintedTraceCoefficient = 2.0;
/// Coefficient that makes the same update the EM fixed point
/// 1/tau = (|r|^2 + w + 2 b0) / (n + 2 a0).
inline constexpr double kEmTraceCoefficient = 0.5;

inline constexpr double kTauMin = 1e-12;
inline constexpr double kTauMax = 1e12;

struct EbsrConfig {
  int iterations = 10;
  double cg_tolerance = 1e-6;
  int cg_max_iterations = 500;
  double gamma_floor = 1e-10;
  /// Requested initial variance; raised to the hyperprior lower bound.
  double gamma_init = 1e-5;
  /// sigma_0 = 5 grey levels.
  double tau_init = 0.04;
  HyperParams hyper;
  /// Fixes tau = known_sigma^-2 and skips the noise update.
  std::optional<double> known_sigma;
  /// Start each CG solve from the previous posterior mean.
  bool warm_start = true;
  double trace_coefficient = kEmTraceCoefficient;

  void validate() const;
  double initial_gamma() const;
};

struct EbsrState {
  Image mu;
  LatentVariances gamma;
  double tau = 0.0;
  /// Diagonal covariance estimate, 1 / diag(W).
  Image v;
  int iteration = 0;
};

struct IterationLog {
  int iter = 0;
  double sigma_est = 0.0;
  int cg_iters = 0;
  double cg_residual = 0.0;
  std::vector<double> mean_gamma;
};

struct EbsrReport {
  std::vector<IterationLog> log;
  double total_seconds = 0.0;
  int scale = 1;
  Kernel2D kernel;
  /// Set when the blur is a Gaussian built from a standard deviation.
  std::optional<double> kernel_std;
  std::string filter_bank;

  /// {"scale", "kernel": {...}, "filter_bank", "iterations": [...],
  ///  "total_seconds"}. Timing is the only field that varies between runs.
  std::string to_json(bool include_timing = true) const;
};

struct EbsrResult {
  Image image;
  EbsrState state;
  EbsrReport report;
};

struct PosteriorMean {
  Image mu;
  CgResult cg;
};

/// Solves W mu = tau H^T D^T y by conjugate gradient.
PosteriorMean posterior_mean(const Image &y, double tau, const FilterBank &bank,
                             const LatentVariances &gamma,
                             const LinearOperator &dh, const EbsrConfig &cfg,
                             const std::optional<Image> &warm_start = {});

/// diag(W) = tau (hbar^2 * m) + sum_l (kbar_l^2 * gamma_l^-1), where m is the
/// decimation mask and * is circular convolution. `hr` is explicit so an empty
/// bank is allowed.
Image diag_precision(double tau, const Kernel2D &h, const DecimationSpec &spec,
                     Dims hr, const FilterBank &bank,
                     const LatentVariances &gamma);

/// Element-wise reciprocal of diag(W).
Image diag_covariance(const Image &diag_w);

/// (k_l^2 * v): the diagonal of K_l diag(v) K_l^T.
Image response_variance(const Image &v, const Kernel2D &k);

/// gamma_l = ((K_l mu)^2 + k_l^2 * v + 2b) / (1 + 2a), floored.
LatentVariances update_gamma(const Image &mu, const Image &v,
                             const FilterBank &bank, const HyperParams &hyper,
                             double gamma_floor);

/// w = sum over LR pixels of (h^2 * v) sampled on the decimation lattice,
/// the diagonal estimate of tr(D H Sigma H^T D^T).
double trace_term(const Image &v, const Kernel2D &h, const DecimationSpec &spec);

/// Closed-form precision update from residual energy and trace term.
double tau_from_terms(double residual_sq, double w, Eigen::Index n,
                      const HyperParams &hyper, double trace_coefficient);

double update_tau(const Image &y, const Image &mu, const Image &v,
                  const Kernel2D &h, const DecimationSpec &spec,
                  const HyperParams &hyper, double trace_coefficient);

/// Empirical Bayesian reconstruction under an arbitrary blur and decimation.
EbsrResult ebsr_solve(const Image &y, const Kernel2D &h,
                      const DecimationSpec &spec, const FilterBank &bank,
                      const EbsrConfig &cfg,
                      std::optional<double> kernel_std = std::nullopt);

/// Super-resolution by `scale` with the scale-derived Gaussian blur.
EbsrResult ebsr_run(const Image &y, int scale, const FilterBank &bank,
                    const EbsrConfig &cfg);
EbsrResult ebsr_run(const Image &y, int scale, const Kernel2D &h,
                    const FilterBank &bank, const EbsrConfig &cfg,
                    std::optional<double> kernel_std = std::nullopt);

/// Decimation is the identity.
EbsrResult deblur_run(const Image &y, const Kernel2D &h, const FilterBank &bank,
                      const EbsrConfig &cfg,
                      std::optional<double> kernel_std = std::nullopt);

} // namespace ebsr

#endif // EBSR_SOLVER_HPP
