#include "ebsr/solver.hpp"

#include "ebsr/convolution.hpp"
#include "ebsr/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ebsr {

void EbsrConfig::validate() const {
  if (iterations < 1) {
    throw std::invalid_argument("iterations must be >= 1");
  }
  if (!(cg_tolerance > 0.0) || cg_max_iterations < 1) {
    throw std::invalid_argument("CG tolerance and iteration cap must be > 0");
  }
  if (!(gamma_floor > 0.0) || !(gamma_init > 0.0)) {
    throw std::invalid_argument("gamma floor and init must be > 0");
  }
  if (!(tau_init > 0.0)) {
    throw std::invalid_argument("tau_init must be > 0");
  }
  if (known_sigma && !(*known_sigma > 0.0)) {
    throw std::invalid_argument("known sigma must be > 0");
  }
  if (!(trace_coefficient >= 0.0)) {
    throw std::invalid_argument("trace coefficient must be >= 0");
  }
  hyper.validate();
}

double EbsrConfig::initial_gamma() const {
  return std::max({gamma_init, hyper.gamma_lower_bound(), gamma_floor});
}

PosteriorMean posterior_mean(const Image &y, double tau, const FilterBank &bank,
                             const LatentVariances &gamma,
                             const LinearOperator &dh, const EbsrConfig &cfg,
                             const std::optional<Image> &warm_start) {
  require_same_dims(dims_of(y), dh.output_dims(), "posterior_mean");
  const PrecisionOperator precision(tau, bank, gamma, dh);
  const Vector rhs = tau * dh.apply_adjoint(Vector(as_vector(y)));
  std::optional<Vector> start;
  if (warm_start) {
    require_same_dims(dims_of(*warm_start), dh.input_dims(),
                      "posterior_mean warm start");
    start = Vector(as_vector(*warm_start));
  }
  PosteriorMean out;
  out.cg = cg_solve<double>(
      [&](const Vector &x) { return precision.apply(x); }, rhs,
      cfg.cg_tolerance, cfg.cg_max_iterations, start);
  out.mu = as_image(out.cg.solution, dh.input_dims());
  return out;
}

Image diag_precision(double tau, const Kernel2D &h, const DecimationSpec &spec,
                     Dims hr, const FilterBank &bank,
                     const LatentVariances &gamma) {
  gamma.validate(bank.size(), hr, 0.0);
  const Image mask = decimation_mask(spec, hr);
  std::vector<Image> terms(bank.size());
  parallel_for(bank.size(), [&](std::size_t l) {
    terms[l] = conv2(gamma.planes[l].cwiseInverse(),
                     bank.filters[l].flipped().squared());
  });
  Image out = tau * conv2(mask, h.flipped().squared());
  for (const auto &t : terms) {
    out += t;
  }
  return out;
}

Image diag_covariance(const Image &diag_w) {
  if (!(diag_w.minCoeff() > 0.0)) {
    throw NumericalError("diag_covariance: non-positive precision entry");
  }
  return diag_w.cwiseInverse();
}

Image response_variance(const Image &v, const Kernel2D &k) {
  return conv2(v, k.squared());
}

LatentVariances update_gamma(const Image &mu, const Image &v,
                             const FilterBank &bank, const HyperParams &hyper,
                             double gamma_floor) {
  require_same_dims(dims_of(mu), dims_of(v), "update_gamma");
  LatentVariances out;
  out.planes.resize(bank.size());
  const double shift = 2.0 * hyper.b;
  const double scale = 1.0 / (1.0 + 2.0 * hyper.a);
  parallel_for(bank.size(), [&](std::size_t l) {
    const Kernel2D &k = bank.filters[l];
    const Image u = conv2(mu, k);
    const Image z = response_variance(v, k);
    out.planes[l] = (((u.array().square() + z.array() + shift) * scale)
                         .max(gamma_floor))
                        .matrix();
  });
  return out;
}

double trace_term(const Image &v, const Kernel2D &h,
                  const DecimationSpec &spec) {
  return downsample(conv2(v, h.squared()), spec).sum();
}

double tau_from_terms(double residual_sq, double w, Eigen::Index n,
                      const HyperParams &hyper, double trace_coefficient) {
  const double numerator = 0.5 * static_cast<double>(n) + hyper.a0;
  const double denominator =
      0.5 * residual_sq + trace_coefficient * w + hyper.b0;
  if (!(denominator > 0.0)) {
    return kTauMax;
  }
  return std::clamp(numerator / denominator, kTauMin, kTauMax);
}

double update_tau(const Image &y, const Image &mu, const Image &v,
                  const Kernel2D &h, const DecimationSpec &spec,
                  const HyperParams &hyper, double trace_coefficient) {
  const Image residual = y - blur_decimate(mu, h, spec);
  return tau_from_terms(residual.squaredNorm(), trace_term(v, h, spec),
                        y.size(), hyper, trace_coefficient);
}

EbsrResult ebsr_solve(const Image &y, const Kernel2D &h,
                      const DecimationSpec &spec, const FilterBank &bank,
                      const EbsrConfig &cfg, std::optional<double> kernel_std) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();
  spec.validate();
  bank.validate(kLoadedZeroMeanTolerance);
  if (!y.allFinite()) {
    throw std::invalid_argument("ebsr: observation has non-finite pixels");
  }
  const Dims hr{y.rows() * spec.factor, y.cols() * spec.factor};
  for (const auto &k : bank.filters) {
    detail::require_kernel_fits(hr, k, "ebsr");
  }
  const LinearOperator dh = compose_dh(h, spec, hr);

  EbsrResult result;
  EbsrState &state = result.state;
  state.tau = cfg.known_sigma ? 1.0 / (*cfg.known_sigma * *cfg.known_sigma)
                              : cfg.tau_init;
  state.gamma = LatentVariances::constant(bank.size(), hr, cfg.initial_gamma());
  state.mu = dh.apply_adjoint(y);

  EbsrReport &report = result.report;
  report.scale = spec.factor;
  report.kernel = h;
  report.kernel_std = kernel_std;
  report.filter_bank = bank.name;

  for (int it = 1; it <= cfg.iterations; ++it) {
    std::optional<Image> start;
    if (cfg.warm_start) {
      start = state.mu;
    }
    PosteriorMean pm =
        posterior_mean(y, state.tau, bank, state.gamma, dh, cfg, start);
    state.mu = std::move(pm.mu);
    if (!state.mu.allFinite()) {
      throw NumericalError("ebsr: posterior mean became non-finite");
    }

    state.v = diag_covariance(
        diag_precision(state.tau, h, spec, hr, bank, state.gamma));
    state.gamma =
        update_gamma(state.mu, state.v, bank, cfg.hyper, cfg.gamma_floor);
    if (!cfg.known_sigma) {
      state.tau = update_tau(y, state.mu, state.v, h, spec, cfg.hyper,
                             cfg.trace_coefficient);
    }
    state.iteration = it;

    IterationLog entry;
    entry.iter = it;
    entry.sigma_est =
        cfg.known_sigma ? *cfg.known_sigma : 1.0 / std::sqrt(state.tau);
    entry.cg_iters = pm.cg.iterations;
    entry.cg_residual = pm.cg.residual;
    entry.mean_gamma = state.gamma.means();
    report.log.push_back(std::move(entry));
  }

  result.image = state.mu;
  report.total_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
  return result;
}

EbsrResult ebsr_run(const Image &y, int scale, const FilterBank &bank,
                    const EbsrConfig &cfg) {
  return ebsr_run(y, scale, blur_kernel_for_scale(scale), bank, cfg,
                  blur_std_for_scale(scale));
}

EbsrResult ebsr_run(const Image &y, int scale, const Kernel2D &h,
                    const FilterBank &bank, const EbsrConfig &cfg,
                    std::optional<double> kernel_std) {
  DecimationSpec spec;
  spec.factor = scale;
  return ebsr_solve(y, h, spec, bank, cfg, kernel_std);
}

EbsrResult deblur_run(const Image &y, const Kernel2D &h, const FilterBank &bank,
                      const EbsrConfig &cfg, std::optional<double> kernel_std) {
  return ebsr_solve(y, h, DecimationSpec{}, bank, cfg, kernel_std);
}

std::string EbsrReport::to_json(bool include_timing) const {
  nlohmann::json doc;
  doc["scale"] = scale;
  nlohmann::json k;
  k["height"] = kernel.rows();
  k["width"] = kernel.cols();
  k["taps"] = std::vector<double>(kernel.taps().data(),
                                  kernel.taps().data() + kernel.taps().size());
  if (kernel_std) {
    k["std"] = *kernel_std;
  }
  doc["kernel"] = std::move(k);
  doc["filter_bank"] = filter_bank;
  doc["iterations"] = nlohmann::json::array();
  for (const auto &e : log) {
    doc["iterations"].push_back({{"iter", e.iter},
                                 {"sigma_est", e.sigma_est},
                                 {"cg_iters", e.cg_iters},
                                 {"cg_residual", e.cg_residual},
                                 {"mean_gamma", e.mean_gamma}});
  }
  if (include_timing) {
    doc["total_seconds"] = total_seconds;
  }
  return doc.dump(2);
}

} // namespace ebsr
