#ifndef EBSR_BASELINES_HPP
#define EBSR_BASELINES_HPP

#include "ebsr/image.hpp"

#include <string>
#include <vector>

namespace ebsr {

/// Pixel replication: out(i, j) = in(i / r, j / r).
Image nearest_neighbor_upscale(const Image &img, int scale);

/// Separable Keys cubic convolution (a = -0.5) with pixel-centre alignment,
/// src = (dst + 0.5) / r - 0.5, and replicated edges. Needs at least 4x4 input.
Image bicubic_upscale(const Image &img, int scale);

/// Keys kernel weight at distance t.
double keys_weight(double t, double a = -0.5);

/// "nn" and "bicubic".
const std::vector<std::string> &baseline_methods();

/// Dispatches by name; throws std::invalid_argument for unknown methods.
Image baseline_upscale(const std::string &method, const Image &img, int scale);

} // namespace ebsr

#endif // EBSR_BASELINES_HPP
