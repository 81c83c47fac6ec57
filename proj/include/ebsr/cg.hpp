#ifndef EBSR_CG_HPP
#define EBSR_CG_HPP

#include "ebsr/image.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebsr {

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar> struct CgResultT {
  VectorT<Scalar> solution;
  int iterations = 0;
  /// Final ||A x - b|| / ||b|| from the recursively updated residual.
  Scalar residual = 0;
  bool converged = false;
  /// Relative residual before the first iteration and after each one.
  std::vector<Scalar> residual_history;
};

using CgResult = CgResultT<double>;

/// Conjugate gradient for a symmetric positive definite operator given as a
/// callable Vector -> Vector. Stops when the relative residual reaches `tol`
/// or after `max_iterations` (reported through `converged`, not thrown).
template <typename Scalar, typename Op>
CgResultT<Scalar>
cg_solve(const Op &op, const VectorT<Scalar> &rhs, Scalar tol,
         int max_iterations,
         const std::optional<VectorT<Scalar>> &warm_start = std::nullopt) {
  using Vec = VectorT<Scalar>;
  CgResultT<Scalar> result;
  const Scalar rhs_norm = rhs.norm();
  if (warm_start && warm_start->size() != rhs.size()) {
    throw DimensionError("cg_solve: warm start length " +
                         std::to_string(warm_start->size()) + " != " +
                         std::to_string(rhs.size()));
  }
  if (rhs_norm == Scalar(0)) {
    result.solution = Vec::Zero(rhs.size());
    result.converged = true;
    result.residual_history.push_back(0);
    return result;
  }

  Vec x = warm_start ? *warm_start : Vec::Zero(rhs.size());
  Vec r = rhs;
  if (warm_start) {
    const Vec ax = op(x);
    if (ax.size() != rhs.size()) {
      throw DimensionError("cg_solve: operator output length mismatch");
    }
    r -= ax;
  }
  Vec p = r;
  Scalar rr = r.squaredNorm();
  result.residual = std::sqrt(rr) / rhs_norm;
  result.residual_history.push_back(result.residual);

  while (result.residual > tol && result.iterations < max_iterations) {
    const Vec ap = op(p);
    if (ap.size() != rhs.size()) {
      throw DimensionError("cg_solve: operator output length mismatch");
    }
    const Scalar curvature = p.dot(ap);
    if (!std::isfinite(curvature)) {
      throw NumericalError("cg_solve: non-finite value encountered");
    }
    if (curvature <= Scalar(0)) {
      throw NumericalError("cg_solve: operator is not positive definite");
    }
    const Scalar alpha = rr / curvature;
    x += alpha * p;
    r -= alpha * ap;
    const Scalar rr_next = r.squaredNorm();
    if (!std::isfinite(rr_next)) {
      throw NumericalError("cg_solve: non-finite value encountered");
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++result.iterations;
    result.residual = std::sqrt(rr) / rhs_norm;
    result.residual_history.push_back(result.residual);
  }
  result.converged = result.residual <= tol;
  result.solution = std::move(x);
  return result;
}

} // namespace ebsr

#endif // EBSR_CG_HPP
