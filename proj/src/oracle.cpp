#include "ebsr/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace ebsr::oracle {

namespace {

DenseMatrix prior_precision(const std::vector<DenseMatrix> &filters,
                            const LatentVariances &gamma, Eigen::Index n) {
  if (filters.size() != gamma.size()) {
    throw DimensionError("oracle: filter and gamma counts differ");
  }
  DenseMatrix p = DenseMatrix::Zero(n, n);
  for (std::size_t l = 0; l < filters.size(); ++l) {
    const Vector inv = as_vector(gamma.planes[l]).cwiseInverse();
    if (filters[l].rows() != n || inv.size() != n) {
      throw DimensionError("oracle: filter matrix size mismatch");
    }
    p.noalias() += filters[l].transpose() * inv.asDiagonal() * filters[l];
  }
  return p;
}

} // namespace

DenseMatrix assemble_operator(const LinearOperator &op) {
  const Eigen::Index n = op.input_size();
  const Eigen::Index m = op.output_size();
  if (n > kMaxAssemblyInput) {
    throw OracleError("assemble_operator: input size " + std::to_string(n) +
                      " exceeds " + std::to_string(kMaxAssemblyInput));
  }
  DenseMatrix forward(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    forward.col(j) = op.apply(Vector(Vector::Unit(n, j)));
  }
  DenseMatrix adjoint(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    adjoint.col(i) = op.apply_adjoint(Vector(Vector::Unit(m, i)));
  }
  const double err = (adjoint - forward.transpose()).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw OracleError("assemble_operator: adjoint differs from transpose by " +
                      std::to_string(err));
  }
  return forward;
}

std::vector<DenseMatrix> assemble_filters(const FilterBank &bank, Dims dims) {
  std::vector<DenseMatrix> out;
  out.reserve(bank.size());
  for (const auto &k : bank.filters) {
    out.push_back(assemble_operator(convolution_operator(k, dims)));
  }
  return out;
}

DenseMatrix dense_precision(double tau, const DenseMatrix &dh,
                            const std::vector<DenseMatrix> &filters,
                            const LatentVariances &gamma) {
  const Eigen::Index n = dh.cols();
  DenseMatrix w = prior_precision(filters, gamma, n);
  w.noalias() += tau * dh.transpose() * dh;
  return w;
}

DensePosterior dense_posterior(const Eigen::VectorXd &y, double tau,
                               const DenseMatrix &dh,
                               const std::vector<DenseMatrix> &filters,
                               const LatentVariances &gamma) {
  if (dh.cols() > kMaxAssemblyInput) {
    throw OracleError("dense_posterior: problem too large");
  }
  if (y.size() != dh.rows()) {
    throw DimensionError("dense_posterior: y length mismatch");
  }
  DensePosterior post;
  post.precision = dense_precision(tau, dh, filters, gamma);
  const Eigen::Index n = post.precision.rows();
  Eigen::LLT<DenseMatrix> llt(post.precision);
  if (llt.info() != Eigen::Success) {
    throw OracleError("dense_posterior: precision is not positive definite");
  }
  post.covariance = llt.solve(DenseMatrix::Identity(n, n));

  const Eigen::FullPivLU<DenseMatrix> lu(post.precision);
  if (!lu.isInvertible()) {
    throw OracleError("dense_posterior: precision is singular");
  }
  const DenseMatrix inverse = lu.inverse();
  const double scale = std::max(1.0, post.covariance.cwiseAbs().maxCoeff());
  if ((inverse - post.covariance).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw OracleError("dense_posterior: Cholesky and LU inverses disagree");
  }
  post.mean = tau * post.covariance * (dh.transpose() * y);
  return post;
}

Eigen::VectorXd dense_diag(const DenseMatrix &m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("dense_diag: matrix is not square");
  }
  return m.diagonal();
}

double dense_neg_log_marginal(const Eigen::VectorXd &y, double tau,
                              const DenseMatrix &dh,
                              const std::vector<DenseMatrix> &filters,
                              const LatentVariances &gamma,
                              const HyperParams &hyper) {
  const Eigen::Index m = dh.rows();
  const Eigen::Index n = dh.cols();
  if (m > kMaxMarginalOutput || n > kMaxAssemblyInput) {
    throw OracleError("dense_neg_log_marginal: problem too large");
  }
  if (y.size() != m) {
    throw DimensionError("dense_neg_log_marginal: y length mismatch");
  }
  if (!(tau > 0.0)) {
    throw OracleError("dense_neg_log_marginal: tau must be positive");
  }
  double value = 0.0;
  if (filters.empty()) {
    value = tau * y.squaredNorm() - static_cast<double>(m) * std::log(tau);
  } else {
    // y^T S^-1 y + log|S| written through W = tau A^T A + P, with the
    // gamma-dependent normaliser of the prior taken per filter response.
    const DenseMatrix w = dense_precision(tau, dh, filters, gamma);
    Eigen::LLT<DenseMatrix> llt(w);
    if (llt.info() != Eigen::Success) {
      throw OracleError("dense_neg_log_marginal: precision is singular");
    }
    const Eigen::VectorXd b = tau * (dh.transpose() * y);
    const DenseMatrix l = llt.matrixL();
    value = tau * y.squaredNorm() - b.dot(llt.solve(b)) +
            2.0 * l.diagonal().array().log().sum() -
            static_cast<double>(m) * std::log(tau);
    for (const auto &plane : gamma.planes) {
      value += plane.array().log().sum();
    }
  }
  for (const auto &plane : gamma.planes) {
    value += (2.0 * hyper.a * plane.array().log() + 2.0 * hyper.b / plane.array())
                 .sum();
  }
  value += -2.0 * hyper.a0 * std::log(tau) + 2.0 * hyper.b0 * tau;
  return value;
}

} // namespace ebsr::oracle
