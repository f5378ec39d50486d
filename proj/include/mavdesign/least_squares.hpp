#ifndef MAVDESIGN_LEAST_SQUARES_HPP
#define MAVDESIGN_LEAST_SQUARES_HPP

#include <Eigen/Dense>
#include <functional>

namespace mavdesign {

/// Residual callback: fills r(beta) and, when jac != nullptr, the Jacobian
/// dr/dbeta. Returns false for inadmissible beta (the trial is rejected).
using ResidualFn =
    std::function<bool(const Eigen::VectorXd& beta, Eigen::VectorXd& r, Eigen::MatrixXd* jac)>;

struct LmOptions {
  int max_iterations = 100;
  double step_tol = 1e-11;
  double grad_tol = 1e-11;
  // Optional box on beta; trial points are clamped inside. Empty = free.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LmResult {
  Eigen::VectorXd beta;
  double rss = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

/// Levenberg-Marquardt minimization of |r(beta)|^2 with multiplicative
/// damping on diag(J^T J). Non-finite residuals and inadmissible trial
/// points are treated as rejected steps.
LmResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& beta0,
                             const LmOptions& opts = {});

}  // namespace mavdesign

#endif  // MAVDESIGN_LEAST_SQUARES_HPP
