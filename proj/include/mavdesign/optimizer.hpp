#ifndef MAVDESIGN_OPTIMIZER_HPP
#define MAVDESIGN_OPTIMIZER_HPP

#include <cstdint>
#include <string>

#include "mavdesign/sensitivity.hpp"

namespace mavdesign {

/// Multistart settings. Zero-valued k_init / max_k / merge_tol select the
/// defaults k_init = p + q, max_k = p + q + 3, merge_tol = 1e-3 (b - a).
struct OptimizerOptions {
  int k_init = 0;
  int max_k = 0;
  int n_starts = 20;
  int max_evals_per_start = 2000;
  std::uint64_t rng_seed = 0;
  double merge_tol = 0.0;
  double drop_tol = 1e-4;
  double eq_tol = 1e-4;   // verification tolerance, relative to Phi^pi
  int grid_size = 1001;   // verification grid
};

struct OptimResult {
  Design design;
  double phi = 0.0;
  SensitivityReport sensitivity;
  std::vector<std::pair<int, double>> trace;  // (start index, final phi)
  bool converged = false;
};

/// Minimizes Phi^pi over designs with k_init support points (growing up to
/// max_k on failed verification) by multistart local search. Starts draw
/// stratified points and Dirichlet(1) weights from per-start substreams of
/// rng_seed; the winner is the lexicographic (phi, start index) minimum, so
/// results do not depend on the worker count.
OptimResult optimize_design(const DesignProblem& problem, const PriorSpec& prior,
                            const OptimizerOptions& opts);

struct NamedDesign {
  std::string name;
  Design design;
};

/// Phi^pi per design plus the relative criterion efficiency
/// Phi^pi(best) / Phi^pi(design); per-design failures land in `error`.
struct ComparisonRow {
  std::string name;
  double phi = std::numeric_limits<double>::quiet_NaN();
  double efficiency = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

std::vector<ComparisonRow> evaluate_and_compare(const std::vector<NamedDesign>& designs,
                                                const DesignProblem& problem,
                                                const PriorSpec& prior);

}  // namespace mavdesign

#endif  // MAVDESIGN_OPTIMIZER_HPP
