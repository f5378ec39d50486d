#ifndef MAVDESIGN_TARGET_HPP
#define MAVDESIGN_TARGET_HPP

#include "mavdesign/candidate.hpp"

namespace mavdesign {

/// Scalar functional mu(theta, gamma) of the mean curve: area under the
/// curve over a region, effective dose ED_alpha, or a pointwise mean.
struct TargetFunctional {
  enum class Kind { kAuc, kEd, kPointMean };

  Kind kind = Kind::kPointMean;
  double region_lo = 0.0;  // AUC
  double region_hi = 0.0;
  double alpha = 0.5;      // ED
  double x0 = 0.0;         // PointMean

  static TargetFunctional auc(double lo, double hi);
  static TargetFunctional ed(double alpha);
  static TargetFunctional point_mean(double x0);

  std::string label() const;
};

void validate_target(const TargetFunctional& target, const DesignSpace& space);

/// Evaluates the target at a parameter point.
///
/// AUC uses a 64-node Gauss-Legendre rule over the region. ED_alpha is the
/// infimum over x of {normalized effect >= alpha}, located on a 512-point
/// bracketing grid and bisected to absolute 1e-10; the normalization uses the
/// design-space endpoints. Throws NumericsError when the effect curve is flat
/// (|eta(b) - eta(a)| < 1e-12) or the threshold is never attained.
double eval_target(const TargetFunctional& target, const ModelFamily& family,
                   const DesignSpace& space, const ParamVector& params);

/// Gradient of mu with respect to (sigma2, vartheta, gamma), length p + q.
/// The sigma2 component is exactly zero for all three targets. AUC gradients
/// integrate grad_eta; ED gradients use central finite differences on
/// eval_target with step 1e-5 * max(1, |param|), re-solving the root each
/// evaluation.
Eigen::VectorXd target_grad_full(const TargetFunctional& target, const ModelFamily& family,
                                 const DesignSpace& space, const ParamVector& params);

/// P_S applied to target_grad_full at the given point, length p + |S|.
Eigen::VectorXd target_grad_sub(const TargetFunctional& target, const ModelFamily& family,
                                const DesignSpace& space, const Candidate& candidate,
                                const ParamVector& params);

}  // namespace mavdesign

#endif  // MAVDESIGN_TARGET_HPP
