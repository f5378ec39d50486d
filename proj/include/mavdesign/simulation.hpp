#ifndef MAVDESIGN_SIMULATION_HPP
#define MAVDESIGN_SIMULATION_HPP

#include <cstdint>

#include "mavdesign/optimizer.hpp"
#include "mavdesign/rounding.hpp"

namespace mavdesign {

/// Data-generating parameter point. sigma2 may be zero (noiseless data);
/// the mean parameters must be admissible for the family.
struct TruthSpec {
  ParamVector params;
};

void validate_truth(const ModelFamily& family, const TruthSpec& truth);

/// Observations with their design point and replicate index.
struct Dataset {
  std::vector<double> x;
  std::vector<int> replicate;
  std::vector<double> y;

  long size() const { return static_cast<long>(y.size()); }
};

/// y_ij = eta(x_i) + sigma * eps_ij with standard normal eps from the seeded
/// stream; draws run in (point, replicate) order so the seed fixes the data.
Dataset gen_data(const ModelFamily& family, const TruthSpec& truth,
                 const std::vector<long>& counts, const std::vector<double>& points,
                 std::uint64_t seed);

/// Gaussian maximum likelihood in one candidate model via profiling: the free
/// mean parameters minimize the residual sum of squares and sigma2_hat =
/// RSS/n (floored at 1e-8). aic = 2 loglik - 2 (p + |S|).
struct FitResult {
  ParamVector params_hat;  // embedded full point, gamma_{S^c} frozen at gamma0
  Eigen::VectorXd beta;    // free mean parameters (vartheta, gamma_S)
  double rss = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  bool converged = false;
};

/// Multistart least-squares fit (5 deterministic starts around the nominal
/// values, +-20%) plus optional extra starts, e.g. embedded submodel fits.
/// The family's fit_bounds box over (vartheta, gamma_S), when present, keeps
/// the fit inside the compact parameter region.
FitResult fit_mle(const ModelFamily& family, const Candidate& candidate, const Dataset& data,
                  const ParamVector& nominal, const DesignSpace& space,
                  const std::vector<Eigen::VectorXd>& extra_starts = {});

/// Smooth AIC weights exp(aic_j / 2) / sum_i exp(aic_i / 2), computed
/// max-shifted for overflow safety.
std::vector<double> smooth_aic_weights(const std::vector<double>& aic_scores);

/// Index of the greatest AIC score; ties break to the smallest index.
int select_aic(const std::vector<double>& aic_scores);

/// Plug-in model averaging estimate sum_j w_j mu(fit_j). Weights with zero
/// mass skip their candidate; target failures propagate.
double estimate_target(const std::vector<FitResult>& fits, const std::vector<double>& weights,
                       const TargetFunctional& target, const ModelFamily& family,
                       const DesignSpace& space);

enum class EstimationMethod { kFixed, kSmoothAic, kAicSelect };

std::string method_name(EstimationMethod method);
EstimationMethod method_from_name(const std::string& name);

struct MseRow {
  std::string design;
  std::string method;
  int truth_id = 0;
  long reps = 0;
  double mse = 0.0;
  long n_invalid = 0;
};

/// Monte Carlo benchmark: rounds each design to n_total observations, then
/// per replicate generates data from substream (seed, design index, replicate),
/// fits every candidate and forms the requested estimators. Replicates run
/// concurrently; accumulation is in replicate order, so (seed, inputs) fix
/// every reported number regardless of the worker count. Replicates whose
/// target evaluation fails are excluded and counted.
std::vector<MseRow> run_mse_study(const DesignProblem& problem, long n_total,
                                  const ParamVector& nominal,
                                  const std::vector<NamedDesign>& designs,
                                  const std::vector<EstimationMethod>& methods,
                                  const TruthSpec& truth, int truth_id, long reps,
                                  std::uint64_t seed);

}  // namespace mavdesign

#endif  // MAVDESIGN_SIMULATION_HPP
