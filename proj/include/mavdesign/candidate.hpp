#ifndef MAVDESIGN_CANDIDATE_HPP
#define MAVDESIGN_CANDIDATE_HPP

#include "mavdesign/family.hpp"

namespace mavdesign {

/// Candidate model f_S: the wide family with the gamma components outside S
/// frozen. Free parameters are (theta, gamma_S) of dimension p + |S|.
///
/// Index bookkeeping (canonical order sigma2, vartheta, gamma):
///   full space      0 .. p+q-1
///   candidate space 0 .. p+|S|-1, mapped through sel(): sel(i) gives the
///   full-space index of candidate coordinate i. P_S is the corresponding
///   selection matrix, so P_S v = v(sel) and P_S M P_S^T = M(sel, sel).
struct Candidate {
  CandidateSubset subset;
  int p = 0;
  int q = 0;
  std::vector<int> selection;       // full-space indices, length p + |S|
  std::vector<int> mean_selection;  // mean-parameter indices, length p - 1 + |S|

  int dim() const { return p + subset.size(); }
  int full_dim() const { return p + q; }
  bool is_wide() const { return subset.size() == q; }

  /// Dense projection P_S of shape (p + |S|) x (p + q).
  Eigen::MatrixXd projection() const;

  /// Gathers candidate coordinates from a full-space vector (applies P_S).
  Eigen::VectorXd select(const Eigen::VectorXd& full) const;

  /// Scatters a candidate-space vector into the full space (applies P_S^T).
  Eigen::VectorXd scatter(const Eigen::VectorXd& sub) const;

  /// Candidate-space components of the mean gradient d eta / d (vartheta, gamma_S).
  Eigen::VectorXd select_mean(const Eigen::VectorXd& mean_grad) const;

  /// Maps free parameters (sigma2, vartheta, gamma_S) to the full parameter
  /// point with gamma_{S^c} frozen at the anchor.
  ParamVector embed(double sigma2, const Eigen::VectorXd& free_mean,
                    const Eigen::VectorXd& gamma_anchor) const;

  /// Free mean parameters (vartheta, gamma_S) of a full parameter point.
  Eigen::VectorXd free_mean_of(const ParamVector& params) const;
};

Candidate build_candidate(const ModelFamily& family, const CandidateSubset& subset);

std::vector<Candidate> build_candidates(const ModelFamily& family,
                                        const AveragingScheme& scheme);

}  // namespace mavdesign

#endif  // MAVDESIGN_CANDIDATE_HPP
