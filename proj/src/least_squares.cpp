#include "mavdesign/least_squares.hpp"

#include <cmath>

namespace mavdesign {

namespace {

bool finite_rss(const Eigen::VectorXd& r, double* rss) {
  const double value = r.squaredNorm();
  *rss = value;
  return std::isfinite(value);
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& beta0,
                             const LmOptions& opts) {
  const bool boxed = opts.lower.size() == beta0.size() && opts.upper.size() == beta0.size();
  const auto clamp_box = [&](Eigen::VectorXd v) {
    if (boxed) v = v.cwiseMax(opts.lower).cwiseMin(opts.upper);
    return v;
  };

  LmResult result;
  result.beta = clamp_box(beta0);

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  if (!fn(result.beta, r, &jac) || !finite_rss(r, &result.rss)) {
    result.rss = std::numeric_limits<double>::infinity();
    return result;  // infeasible start
  }

  const int dim = static_cast<int>(beta0.size());
  double lambda = 1e-3;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    Eigen::VectorXd g_proj = g;
    if (boxed) {
      for (int i = 0; i < dim; ++i) {
        const double eps = 1e-12 * std::max(1.0, std::abs(result.beta(i)));
        if ((result.beta(i) <= opts.lower(i) + eps && g(i) > 0.0) ||
            (result.beta(i) >= opts.upper(i) - eps && g(i) < 0.0)) {
          g_proj(i) = 0.0;  // descent blocked by the box
        }
      }
    }
    if (g_proj.lpNorm<Eigen::Infinity>() < opts.grad_tol * std::max(1.0, result.rss)) {
      result.converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 25; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (int i = 0; i < dim; ++i) {
        damped(i, i) += lambda * std::max(jtj(i, i), 1e-12);
      }
      const Eigen::VectorXd raw_step = damped.ldlt().solve(-g);
      if (!raw_step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd trial = clamp_box(result.beta + raw_step);
      const Eigen::VectorXd step = trial - result.beta;
      Eigen::VectorXd r_trial;
      Eigen::MatrixXd jac_trial;
      double rss_trial;
      if (fn(trial, r_trial, &jac_trial) && finite_rss(r_trial, &rss_trial) &&
          rss_trial < result.rss) {
        const double improvement = result.rss - rss_trial;
        result.beta = trial;
        result.rss = rss_trial;
        r.swap(r_trial);
        jac.swap(jac_trial);
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (step.lpNorm<Eigen::Infinity>() <
                opts.step_tol * (1.0 + result.beta.lpNorm<Eigen::Infinity>()) ||
            improvement < 1e-14 * std::max(1.0, result.rss)) {
          result.converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped || result.converged) {
      if (!stepped) result.converged = false;
      break;
    }
  }
  return result;
}

}  // namespace mavdesign
