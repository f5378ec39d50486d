#ifndef MAVDESIGN_FAMILY_HPP
#define MAVDESIGN_FAMILY_HPP

#include <functional>
#include <string>

#include "mavdesign/types.hpp"

namespace mavdesign {

/// Nonlinear Gaussian regression family with mean eta(x, vartheta, gamma),
/// homoscedastic variance sigma2, p protected parameters (sigma2 included)
/// and q optional parameters gamma anchored at gamma0 in the narrow model.
///
/// mean_grad returns d eta / d (vartheta, gamma) in canonical order, length
/// p - 1 + q. Families registered without an analytic gradient fall back to
/// central finite differences with step 1e-6 * max(1, |value|).
struct ModelFamily {
  using MeanFn = std::function<double(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using GradFn =
      std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using AdmissibleFn = std::function<bool(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using BoundsFn =
      std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(const DesignSpace&)>;

  std::string name;
  int p = 0;
  int q = 0;
  Eigen::VectorXd gamma0;
  MeanFn mean;
  GradFn mean_grad;          // may be empty; grad_eta then differentiates mean
  AdmissibleFn admissible;   // may be empty; defaults to always admissible
  BoundsFn fit_bounds;       // box for ML fitting over (vartheta, gamma); may be empty

  int n_mean_params() const { return p - 1 + q; }
  bool params_admissible(const Eigen::VectorXd& vartheta, const Eigen::VectorXd& gamma) const {
    return !admissible || admissible(vartheta, gamma);
  }
};

/// Sigmoid Emax: eta = gamma1 + vartheta1 * x^gamma2 / (x^gamma2 + vartheta2^gamma2),
/// p = 3, q = 2, gamma0 = (0, 1). The narrow model is Michaelis-Menten.
ModelFamily sigmoid_emax_family();

/// Four-parameter logistic: eta = gamma1 + vartheta1 / (1 + exp((vartheta2 - x)/gamma2)),
/// p = 3, q = 2, gamma0 = (0, 1).
ModelFamily logistic4_family();

/// Families accepted in scenario files: "sigmoid_emax", "logistic4".
ModelFamily family_by_id(const std::string& id);

/// eta(x, vartheta, gamma); domain-checked against the design space and the
/// family's admissibility predicate.
double mean_eta(const ModelFamily& family, double x, const DesignSpace& space,
                const ParamVector& params);

/// Analytic gradient of eta with respect to (vartheta, gamma), canonical
/// order, length p - 1 + q.
Eigen::VectorXd grad_eta(const ModelFamily& family, double x, const DesignSpace& space,
                         const ParamVector& params);

void validate_params(const ModelFamily& family, const ParamVector& params);

}  // namespace mavdesign

#endif  // MAVDESIGN_FAMILY_HPP
