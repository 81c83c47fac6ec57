#include "ebsr/convolution.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>

namespace ebsr {

namespace {

using ComplexImage =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::RowMajor>;

void fft2_inplace(ComplexImage &m, bool inverse) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in;
  Eigen::VectorXcd out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    in = m.row(r).transpose();
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    m.row(r) = out.transpose();
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    in = m.col(c);
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    m.col(c) = out;
  }
}

} // namespace

Image fft_conv2(const Image &img, const Kernel2D &k) {
  detail::require_kernel_fits(dims_of(img), k, "fft_conv2");
  const Eigen::Index rows = img.rows();
  const Eigen::Index cols = img.cols();
  // Point spread function wrapped so the anchor sits at the origin.
  ComplexImage psf = ComplexImage::Zero(rows, cols);
  for (Eigen::Index a = 0; a < k.rows(); ++a) {
    for (Eigen::Index b = 0; b < k.cols(); ++b) {
      psf(detail::wrap(a - k.anchor_row(), rows),
          detail::wrap(b - k.anchor_col(), cols)) += k.taps()(a, b);
    }
  }
  ComplexImage spectrum = img.cast<std::complex<double>>();
  fft2_inplace(psf, false);
  fft2_inplace(spectrum, false);
  spectrum = spectrum.cwiseProduct(psf);
  fft2_inplace(spectrum, true);
  return spectrum.real();
}

Image conv2(const Image &img, const Kernel2D &k) {
  const double work =
      static_cast<double>(k.taps().size()) * static_cast<double>(img.size());
  return work > kFftCrossover ? fft_conv2(img, k) : conv2_circular(img, k);
}

Image conv2_transposed(const Image &img, const Kernel2D &k) {
  return conv2(img, k.flipped());
}

} // namespace ebsr
