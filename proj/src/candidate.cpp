#include "mavdesign/candidate.hpp"

namespace mavdesign {

Eigen::MatrixXd Candidate::projection() const {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dim(), full_dim());
  for (int i = 0; i < dim(); ++i) P(i, selection[i]) = 1.0;
  return P;
}

Eigen::VectorXd Candidate::select(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = full(selection[i]);
  return out;
}

Eigen::VectorXd Candidate::scatter(const Eigen::VectorXd& sub) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(full_dim());
  for (int i = 0; i < dim(); ++i) out(selection[i]) = sub(i);
  return out;
}

Eigen::VectorXd Candidate::select_mean(const Eigen::VectorXd& mean_grad) const {
  Eigen::VectorXd out(static_cast<int>(mean_selection.size()));
  for (size_t i = 0; i < mean_selection.size(); ++i) out(i) = mean_grad(mean_selection[i]);
  return out;
}

ParamVector Candidate::embed(double sigma2, const Eigen::VectorXd& free_mean,
                             const Eigen::VectorXd& gamma_anchor) const {
  ParamVector params;
  params.sigma2 = sigma2;
  params.vartheta = free_mean.head(p - 1);
  params.gamma = gamma_anchor;
  for (int i = 0; i < subset.size(); ++i) {
    params.gamma(subset.indices[i] - 1) = free_mean(p - 1 + i);
  }
  return params;
}

Eigen::VectorXd Candidate::free_mean_of(const ParamVector& params) const {
  Eigen::VectorXd out(p - 1 + subset.size());
  out.head(p - 1) = params.vartheta;
  for (int i = 0; i < subset.size(); ++i) {
    out(p - 1 + i) = params.gamma(subset.indices[i] - 1);
  }
  return out;
}

Candidate build_candidate(const ModelFamily& family, const CandidateSubset& subset) {
  validate_subset(subset, family.q);
  Candidate c;
  c.subset = subset;
  c.p = family.p;
  c.q = family.q;
  c.selection.reserve(family.p + subset.size());
  for (int i = 0; i < family.p; ++i) c.selection.push_back(i);
  for (int idx : subset.indices) c.selection.push_back(family.p - 1 + idx);
  c.mean_selection.reserve(family.p - 1 + subset.size());
  for (int i = 0; i < family.p - 1; ++i) c.mean_selection.push_back(i);
  for (int idx : subset.indices) c.mean_selection.push_back(family.p - 2 + idx);
  return c;
}

std::vector<Candidate> build_candidates(const ModelFamily& family,
                                        const AveragingScheme& scheme) {
  validate_scheme(scheme, family.q);
  std::vector<Candidate> out;
  out.reserve(scheme.candidates.size());
  for (const auto& s : scheme.candidates) out.push_back(build_candidate(family, s));
  return out;
}

}  // namespace mavdesign
