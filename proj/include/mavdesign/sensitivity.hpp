#ifndef MAVDESIGN_SENSITIVITY_HPP
#define MAVDESIGN_SENSITIVITY_HPP

#include "mavdesign/criterion.hpp"

namespace mavdesign {

/// Grid evaluation of the sensitivity function d_pi for an optimality check.
/// `grid` holds the uniform grid followed by the support points, in that
/// order; max_violation is the maximum of d_pi over all evaluated points.
/// The check passes iff max_violation <= tol and every |support residual|
/// stays within tol.
struct SensitivityReport {
  std::vector<double> grid;
  std::vector<double> d_values;
  double max_violation = 0.0;
  std::vector<double> support_residuals;
  double tol = 0.0;
  double phi = 0.0;
  bool passed = false;
};

/// h~_S(xi*, xi_x) = P_S^T J_S^{-1}(xi*) J_S(xi_x) J_S^{-1}(xi*) c_S.
Eigen::VectorXd h_tilde(const ModelFamily& family, const Candidate& candidate,
                        const Design& design, double x, const ParamVector& params,
                        const TargetFunctional& target, const DesignSpace& space);

/// Directional derivative of the bias nu toward the one-point design at x.
double d1(const DesignProblem& problem, const Design& design, double x,
          const ParamVector& params);

/// Directional derivative of the variance tau^2 toward the one-point design.
double d2(const DesignProblem& problem, const Design& design, double x,
          const ParamVector& params);

/// Sensitivity function: the prior average of -2 nu D_1 - D_2; equals minus
/// the directional derivative of Phi^pi toward xi_x. Nonpositive everywhere
/// with equality on the support is necessary for optimality.
double d_pi(const DesignProblem& problem, const Design& design, double x,
            const PriorSpec& prior);

/// Evaluates d_pi on a uniform grid of grid_size points plus the support
/// points; never throws on a failed check, only reports it.
SensitivityReport check_optimality(const DesignProblem& problem, const Design& design,
                                   const PriorSpec& prior, int grid_size, double tol);

/// Same check on a prebuilt evaluator (avoids recomputing target gradients).
SensitivityReport check_optimality(const CriterionEvaluator& eval, const Design& design,
                                   int grid_size, double tol);

}  // namespace mavdesign

#endif  // MAVDESIGN_SENSITIVITY_HPP
