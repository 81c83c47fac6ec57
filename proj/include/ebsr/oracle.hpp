#ifndef EBSR_ORACLE_HPP
#define EBSR_ORACLE_HPP

// Dense reference implementations for tiny problems. Everything here builds
// explicit matrices and is only meant for tests and diagnostics.

#include "ebsr/image.hpp"
#include "ebsr/linear_operator.hpp"
#include "ebsr/prior.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace ebsr::oracle {

using DenseMatrix = Eigen::MatrixXd;

class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr Eigen::Index kMaxAssemblyInput = 256;
inline constexpr Eigen::Index kMaxMarginalOutput = 128;

/// Column j is op.apply(e_j). Also assembles the adjoint and throws if it
/// differs from the transpose by more than 1e-10.
DenseMatrix assemble_operator(const LinearOperator &op);

/// One dense K_l per filter on an image of size `dims`.
std::vector<DenseMatrix> assemble_filters(const FilterBank &bank, Dims dims);

/// W = tau A^T A + sum_l K_l^T diag(1 / gamma_l) K_l.
DenseMatrix dense_precision(double tau, const DenseMatrix &dh,
                            const std::vector<DenseMatrix> &filters,
                            const LatentVariances &gamma);

struct DensePosterior {
  Eigen::VectorXd mean;
  DenseMatrix covariance;
  DenseMatrix precision;
};

/// Exact posterior mean and covariance. The covariance comes from a Cholesky
/// solve and is cross-checked against a separate LU inverse.
DensePosterior dense_posterior(const Eigen::VectorXd &y, double tau,
                               const DenseMatrix &dh,
                               const std::vector<DenseMatrix> &filters,
                               const LatentVariances &gamma);

Eigen::VectorXd dense_diag(const DenseMatrix &m);

/// Twice the negative log evidence, dropping constants:
///   y^T S^-1 y + log|S| + sum(2a log gamma + 2b / gamma) - 2a0 log tau
///   + 2 b0 tau,  S = tau^-1 I + A P^-1 A^T,
/// where P is the prior precision and the prior normaliser is taken per filter
/// response, (2 pi gamma)^-1/2 each. That is the objective the variance and
/// noise updates are stationary points of; it replaces -log|P| by
/// sum(log gamma), which also keeps the value finite when every filter
/// annihilates constants. With an empty bank S = tau^-1 I.
double dense_neg_log_marginal(const Eigen::VectorXd &y, double tau,
                              const DenseMatrix &dh,
                              const std::vector<DenseMatrix> &filters,
                              const LatentVariances &gamma,
                              const HyperParams &hyper);

} // namespace ebsr::oracle

#endif // EBSR_ORACLE_HPP
