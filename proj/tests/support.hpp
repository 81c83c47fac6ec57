#ifndef EBSR_TESTS_SUPPORT_HPP
#define EBSR_TESTS_SUPPORT_HPP

#include "ebsr/image.hpp"
#include "ebsr/kernel.hpp"
#include "ebsr/prior.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace ebsr::test {

inline std::filesystem::path data_dir() { return EBSR_DATA_DIR; }

inline Image random_image(std::mt19937_64 &rng, Eigen::Index rows,
                          Eigen::Index cols, double lo = 0.0,
                          double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Image img(rows, cols);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    img.data()[i] = dist(rng);
  }
  return img;
}

inline Vector random_vector(std::mt19937_64 &rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = dist(rng);
  }
  return v;
}

inline Kernel2D random_kernel(std::mt19937_64 &rng, Eigen::Index rows,
                              Eigen::Index cols) {
  return Kernel2D(random_image(rng, rows, cols, -1.0, 1.0));
}

inline int random_int(std::mt19937_64 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline LatentVariances random_gamma(std::mt19937_64 &rng, std::size_t filters,
                                    Dims dims, double lo = 0.5,
                                    double hi = 50.0) {
  LatentVariances g;
  for (std::size_t l = 0; l < filters; ++l) {
    g.planes.push_back(random_image(rng, dims.rows, dims.cols, lo, hi));
  }
  return g;
}

/// max |a - b| / max(|b|, tiny).
template <typename A, typename B>
double rel_error(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

/// Ramp background with a disk, a dark rectangle and a band of stripes.
inline Image synthetic_scene(Eigen::Index n = 64) {
  Image img(n, n);
  const double s = static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double di = static_cast<double>(i);
      const double dj = static_cast<double>(j);
      double v = 60.0 + 100.0 * di / s;
      if ((di - 20) * (di - 20) + (dj - 22) * (dj - 22) < 144.0) {
        v = 200.0;
      }
      if (i > 36 && i < 56 && j > 30 && j < 58) {
        v = 30.0;
      }
      if (i > 40) {
        v += 25.0 * std::sin(dj / 5.0);
      }
      img(i, j) = v;
    }
  }
  return img;
}

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ebsr-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }
  const std::filesystem::path &path() const { return path_; }

private:
  std::filesystem::path path_;
};

} // namespace ebsr::test

#endif // EBSR_TESTS_SUPPORT_HPP
