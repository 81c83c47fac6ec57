#include "cli.hpp"

#include "ebsr/baselines.hpp"
#include "ebsr/color.hpp"
#include "ebsr/convolution.hpp"
#include "ebsr/filter_bank.hpp"
#include "ebsr/image_io.hpp"
#include "ebsr/kernel.hpp"
#include "ebsr/linear_operator.hpp"
#include "ebsr/metrics.hpp"
#include "ebsr/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <optional>
#include <ostream>
#include <random>

namespace ebsr::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct BlurFlags {
  std::optional<double> std;
  std::optional<int> size;
};

struct SolveFlags {
  std::string input;
  std::string output;
  int scale = 3;
  int iters = 10;
  std::string filters;
  std::optional<double> sigma;
  double gamma_b = HyperParams{}.b;
  std::string report;
  BlurFlags blur;
};

struct DegradeFlags {
  std::string input;
  std::string output;
  int scale = 3;
  double noise_sigma = 0.0;
  std::optional<std::uint64_t> seed;
  BlurFlags blur;
};

struct EvalFlags {
  std::string reference;
  std::string input;
  int shave = 0;
};

struct BaselineFlags {
  std::string input;
  std::string output;
  int scale = 3;
  std::string method = "bicubic";
};

void add_blur_flags(CLI::App *cmd, BlurFlags &flags) {
  cmd->add_option("--kernel-std", flags.std, "Gaussian blur std (pixels)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--kernel-size", flags.size, "Gaussian blur size (odd)")
      ->check(CLI::PositiveNumber);
}

struct Blur {
  Kernel2D kernel;
  double std = 0.0;
};

// Missing pieces fall back to the scale-derived defaults.
Blur resolve_blur(const BlurFlags &flags, double default_std) {
  Blur blur;
  blur.std = flags.std.value_or(default_std);
  const int size = flags.size.value_or(blur_size_for_std(blur.std));
  if (size % 2 == 0) {
    throw UsageError("--kernel-size must be odd");
  }
  blur.kernel = gaussian_kernel(blur.std, size);
  return blur;
}

FilterBank resolve_bank(const std::string &path) {
  return path.empty() ? default_filter_bank() : load_filter_bank(path);
}

EbsrConfig solver_config(const SolveFlags &flags) {
  EbsrConfig cfg;
  cfg.iterations = flags.iters;
  cfg.known_sigma = flags.sigma;
  cfg.hyper.b = flags.gamma_b;
  return cfg;
}

json kernel_json(const Blur &blur) {
  return {{"std", blur.std},
          {"size", blur.kernel.rows()}};
}

Image reconstruct(const Image &y, int scale, const Blur &blur,
                  const FilterBank &bank, const EbsrConfig &cfg,
                  std::string *report) {
  DecimationSpec spec;
  spec.factor = scale;
  EbsrResult result = ebsr_solve(y, blur.kernel, spec, bank, cfg, blur.std);
  if (report) {
    *report = result.report.to_json();
  }
  return std::move(result.image);
}

// Shared by sr and deblur so the two paths stay identical at scale 1.
int solve_command(const SolveFlags &flags, int scale, const Blur &blur,
                  std::ostream &out) {
  const FilterBank bank = resolve_bank(flags.filters);
  const EbsrConfig cfg = solver_config(flags);
  std::string report;
  LoadedImage loaded = load_image(flags.input);
  if (auto *gray = std::get_if<Image>(&loaded)) {
    const Image hr = reconstruct(*gray, scale, blur, bank, cfg, &report);
    if (!flags.report.empty()) {
      write_text_atomic(flags.report, report + "\n");
    }
    save_image(hr, flags.output);
    out << "wrote " << flags.output << " (" << hr.rows() << "x" << hr.cols()
        << ")\n";
    return kExitOk;
  }
  const ColorImage ycc = rgb_to_ycbcr(std::get<ColorImage>(loaded));
  ColorImage hr;
  hr.space = ColorSpace::YCbCr;
  hr.planes[0] = reconstruct(ycc.planes[0], scale, blur, bank, cfg, &report)
                     .cwiseMax(0.0)
                     .cwiseMin(255.0);
  hr.planes[1] = bicubic_upscale(ycc.planes[1], scale);
  hr.planes[2] = bicubic_upscale(ycc.planes[2], scale);
  if (!flags.report.empty()) {
    write_text_atomic(flags.report, report + "\n");
  }
  save_image(ycbcr_to_rgb(hr), flags.output);
  out << "wrote " << flags.output << " (" << hr.rows() << "x" << hr.cols()
      << ", color)\n";
  return kExitOk;
}

int cmd_sr(const SolveFlags &flags, std::ostream &out) {
  const Blur blur = resolve_blur(flags.blur, blur_std_for_scale(flags.scale));
  return solve_command(flags, flags.scale, blur, out);
}

int cmd_deblur(const SolveFlags &flags, std::ostream &out) {
  const Blur blur = resolve_blur(flags.blur, 2.0);
  return solve_command(flags, 1, blur, out);
}

struct Crop {
  Eigen::Index top = 0;
  Eigen::Index left = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

Crop centered_crop(Dims dims, int scale) {
  Crop c;
  c.rows = dims.rows / scale * scale;
  c.cols = dims.cols / scale * scale;
  c.top = (dims.rows - c.rows) / 2;
  c.left = (dims.cols - c.cols) / 2;
  return c;
}

Image degrade_plane(const Image &hr, const Crop &crop, const Kernel2D &h,
                    const DecimationSpec &spec, double sigma,
                    std::mt19937_64 &rng) {
  const Image x = hr.block(crop.top, crop.left, crop.rows, crop.cols);
  Image y = blur_decimate(x, h, spec);
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y.data()[i] += noise(rng);
    }
  }
  return y;
}

int cmd_degrade(const DegradeFlags &flags, std::ostream &out,
                std::ostream &err) {
  if (!flags.seed) {
    throw UsageError("degrade requires --seed");
  }
  if (!(flags.noise_sigma >= 0.0) || !std::isfinite(flags.noise_sigma)) {
    throw UsageError("--noise-sigma must be >= 0");
  }
  const Blur blur = resolve_blur(flags.blur, blur_std_for_scale(flags.scale));
  DecimationSpec spec;
  spec.factor = flags.scale;
  std::mt19937_64 rng(*flags.seed);

  LoadedImage loaded = load_image(flags.input);
  const Dims dims = std::visit(
      [](const auto &img) {
        return Dims{img.rows(), img.cols()};
      },
      loaded);
  const Crop crop = centered_crop(dims, flags.scale);
  if (crop.rows == 0 || crop.cols == 0) {
    throw std::invalid_argument("input is smaller than the scale factor");
  }
  if (crop.rows != dims.rows || crop.cols != dims.cols) {
    err << "warning: " << dims.rows << "x" << dims.cols
        << " is not a multiple of " << flags.scale << "; center-cropped to "
        << crop.rows << "x" << crop.cols << "\n";
  }

  json sidecar = {{"scale", flags.scale},
                  {"noise_sigma", flags.noise_sigma},
                  {"seed", *flags.seed},
                  {"kernel", kernel_json(blur)},
                  {"crop",
                   {{"top", crop.top},
                    {"left", crop.left},
                    {"rows", crop.rows},
                    {"cols", crop.cols}}}};
  sidecar["kernel"]["taps"] = std::vector<double>(
      blur.kernel.taps().data(),
      blur.kernel.taps().data() + blur.kernel.taps().size());

  const std::string sidecar_path = flags.output + ".json";
  if (auto *gray = std::get_if<Image>(&loaded)) {
    const Image y = degrade_plane(*gray, crop, blur.kernel, spec,
                                  flags.noise_sigma, rng);
    write_text_atomic(sidecar_path, sidecar.dump(2) + "\n");
    save_image(y, flags.output);
  } else {
    const ColorImage &rgb = std::get<ColorImage>(loaded);
    ColorImage y;
    y.space = ColorSpace::RGB;
    for (int c = 0; c < 3; ++c) {
      y.planes[c] = degrade_plane(rgb.planes[c], crop, blur.kernel, spec,
                                  flags.noise_sigma, rng);
    }
    write_text_atomic(sidecar_path, sidecar.dump(2) + "\n");
    save_image(y, flags.output);
  }
  out << "wrote " << flags.output << " and " << sidecar_path << "\n";
  return kExitOk;
}

int cmd_eval(const EvalFlags &flags, std::ostream &out) {
  const Image ref = shave_border(load_gray(flags.reference), flags.shave);
  const Image est = shave_border(load_gray(flags.input), flags.shave);
  const QualityReport q = evaluate(ref, est);
  json doc;
  if (std::isinf(q.psnr)) {
    doc["psnr"] = "inf";
  } else {
    doc["psnr"] = q.psnr;
  }
  doc["ssim"] = q.ssim;
  doc["mse"] = q.mse;
  out << doc.dump() << "\n";
  return kExitOk;
}

int cmd_baseline(const BaselineFlags &flags, std::ostream &out) {
  LoadedImage loaded = load_image(flags.input);
  if (auto *gray = std::get_if<Image>(&loaded)) {
    save_image(baseline_upscale(flags.method, *gray, flags.scale),
               flags.output);
  } else {
    ColorImage rgb = std::get<ColorImage>(loaded);
    for (auto &plane : rgb.planes) {
      plane = baseline_upscale(flags.method, plane, flags.scale);
    }
    save_image(rgb, flags.output);
  }
  out << "wrote " << flags.output << "\n";
  return kExitOk;
}

void add_solve_flags(CLI::App *cmd, SolveFlags &flags, bool with_scale) {
  cmd->add_option("--input", flags.input, "Observed image")->required();
  cmd->add_option("--output", flags.output, "Reconstruction")->required();
  if (with_scale) {
    cmd->add_option("--scale", flags.scale, "Upscaling factor")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--iters", flags.iters, "Outer iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--filters", flags.filters, "Filter bank JSON");
  cmd->add_option("--sigma", flags.sigma,
                  "Known noise std; disables noise estimation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma-b", flags.gamma_b,
                  "Variance hyperprior scale b (pixel^2)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--report", flags.report, "Write a JSON run report");
  add_blur_flags(cmd, flags.blur);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Empirical Bayesian super-resolution and deblurring"};
  app.name("ebsr");
  app.require_subcommand(1);

  SolveFlags sr;
  add_solve_flags(app.add_subcommand("sr", "Super-resolve an image"), sr,
                  true);

  SolveFlags deblur;
  add_solve_flags(app.add_subcommand("deblur", "Deblur an image"), deblur,
                  false);

  DegradeFlags degrade;
  CLI::App *deg =
      app.add_subcommand("degrade", "Blur, decimate and add noise");
  deg->add_option("--input", degrade.input, "High-resolution image")
      ->required();
  deg->add_option("--output", degrade.output, "Low-resolution image")
      ->required();
  deg->add_option("--scale", degrade.scale, "Decimation factor")
      ->check(CLI::PositiveNumber);
  deg->add_option("--noise-sigma", degrade.noise_sigma, "Noise std");
  deg->add_option("--seed", degrade.seed, "Noise seed (required)");
  add_blur_flags(deg, degrade.blur);

  EvalFlags ev;
  CLI::App *eval = app.add_subcommand("eval", "Compare two images");
  eval->add_option("--reference", ev.reference, "Ground truth")->required();
  eval->add_option("--input", ev.input, "Estimate")->required();
  eval->add_option("--shave", ev.shave, "Border to ignore on every side")
      ->check(CLI::NonNegativeNumber);

  BaselineFlags bl;
  CLI::App *base = app.add_subcommand("baseline", "Interpolation baseline");
  base->add_option("--input", bl.input, "Low-resolution image")->required();
  base->add_option("--output", bl.output, "Upscaled image")->required();
  base->add_option("--scale", bl.scale, "Upscaling factor")
      ->check(CLI::PositiveNumber);
  base->add_option("--method", bl.method, "nn or bicubic")
      ->check(CLI::IsMember(baseline_methods()));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("sr")) {
      return cmd_sr(sr, out);
    }
    if (app.got_subcommand("deblur")) {
      return cmd_deblur(deblur, out);
    }
    if (app.got_subcommand("degrade")) {
      return cmd_degrade(degrade, out, err);
    }
    if (app.got_subcommand("eval")) {
      return cmd_eval(ev, out);
    }
    return cmd_baseline(bl, out);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

} // namespace ebsr::cli
