#pragma once

#include <Eigen/Core>
#include <functional>

namespace gbtail {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double fmin = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double ftol = 1e-9;   // relative spread of simplex function values
  int max_iter = 5000;  // reflection/contraction cycles
};

/// Downhill simplex minimizer. The objective may return +inf (or NaN,
/// treated as +inf) to mark infeasible points; the simplex contracts away
/// from them.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& step,
    const NelderMeadOptions& options = {});

}  // namespace gbtail
