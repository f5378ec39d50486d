#ifndef MAVDESIGN_TYPES_HPP
#define MAVDESIGN_TYPES_HPP

#include <Eigen/Dense>
#include <vector>

#include "mavdesign/errors.hpp"

namespace mavdesign {

/// Dose interval [lower, upper] on which designs live.
struct DesignSpace {
  double lower = 0.0;
  double upper = 1.0;

  double length() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
};

void validate_space(const DesignSpace& space);

/// Approximate design: support points with simplex weights.
///
/// A valid design has strictly increasing points inside the design space,
/// strictly positive weights summing to one (within 1e-12), and equal list
/// lengths. Raw point/weight lists (unsorted, with near-duplicates) are
/// allowed as input to normalize_design only.
struct Design {
  std::vector<double> points;
  std::vector<double> weights;

  int k() const { return static_cast<int>(points.size()); }
};

/// Throws ValidationError unless all Design invariants hold for `space`.
void validate_design(const Design& design, const DesignSpace& space);

/// Sorts, merges points closer than merge_tol (weights summed, position the
/// weight-weighted mean), drops weights below drop_tol and renormalizes.
/// Idempotent. merge_tol <= 0 selects the default 1e-3 * (upper - lower).
Design normalize_design(const Design& design, const DesignSpace& space,
                        double merge_tol = 0.0, double drop_tol = 1e-4);

/// Parameter point in canonical order: sigma2 first, then the vartheta
/// components, then the gamma components in ascending index.
struct ParamVector {
  double sigma2 = 1.0;
  Eigen::VectorXd vartheta;
  Eigen::VectorXd gamma;

  int dim() const { return 1 + static_cast<int>(vartheta.size() + gamma.size()); }

  /// Stacked (sigma2, vartheta, gamma).
  Eigen::VectorXd full() const;

  /// Stacked mean parameters (vartheta, gamma); excludes sigma2.
  Eigen::VectorXd mean_params() const;
};

/// Subset S of {1, ..., q} indexing the free extra parameters of a candidate.
struct CandidateSubset {
  std::vector<int> indices;  // sorted, unique, 1-based

  int size() const { return static_cast<int>(indices.size()); }
  bool operator==(const CandidateSubset& other) const { return indices == other.indices; }

  /// Human-readable form "{1,2}" used in error messages and logs.
  std::string label() const;
};

/// Throws ValidationError unless indices are sorted, unique and within 1..q.
void validate_subset(const CandidateSubset& subset, int q);

/// Candidate list with fixed nonnegative averaging weights summing to one.
struct AveragingScheme {
  std::vector<CandidateSubset> candidates;
  std::vector<double> g_weights;

  int r() const { return static_cast<int>(candidates.size()); }
};

void validate_scheme(const AveragingScheme& scheme, int q);

/// Local deviation of the extra parameters. The canonical stored form is the
/// raw delta together with the reference sample size n; scenario files carry
/// delta/sqrt(n) and n.
struct Misspecification {
  Eigen::VectorXd delta;
  long n = 1;

  static Misspecification from_scaled(const Eigen::VectorXd& delta_over_sqrt_n, long n);
};

}  // namespace mavdesign

#endif  // MAVDESIGN_TYPES_HPP
