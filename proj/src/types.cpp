#include "mavdesign/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mavdesign {

namespace {

constexpr double kSimplexTol = 1e-12;

}  // namespace

void validate_space(const DesignSpace& space) {
  if (!std::isfinite(space.lower) || !std::isfinite(space.upper)) {
    throw ValidationError("design_space: bounds must be finite");
  }
  if (!(space.lower < space.upper)) {
    throw ValidationError("design_space: lower must be strictly below upper");
  }
}

void validate_design(const Design& design, const DesignSpace& space) {
  validate_space(space);
  if (design.points.empty()) {
    throw ValidationError("design: must have at least one support point");
  }
  if (design.points.size() != design.weights.size()) {
    throw ValidationError("design: points and weights must have equal length");
  }
  double sum = 0.0;
  for (size_t i = 0; i < design.points.size(); ++i) {
    const double x = design.points[i];
    const double w = design.weights[i];
    if (!std::isfinite(x) || !space.contains(x)) {
      throw ValidationError("design: point " + std::to_string(x) + " outside design space");
    }
    if (i > 0 && !(design.points[i - 1] < x)) {
      throw ValidationError("design: points must be strictly increasing");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("design: weights must be strictly positive");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw ValidationError("design: weights must sum to 1 within 1e-12");
  }
}

Design normalize_design(const Design& design, const DesignSpace& space,
                        double merge_tol, double drop_tol) {
  validate_space(space);
  if (merge_tol <= 0.0) merge_tol = 1e-3 * space.length();
  if (design.points.size() != design.weights.size()) {
    throw ValidationError("design: points and weights must have equal length");
  }

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(design.points.size());
  for (size_t i = 0; i < design.points.size(); ++i) {
    const double x = design.points[i];
    const double w = design.weights[i];
    if (!std::isfinite(x) || !space.contains(x)) {
      throw ValidationError("normalize_design: point " + std::to_string(x) +
                            " outside design space");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("normalize_design: weights must be nonnegative");
    }
    if (w > 0.0) atoms.emplace_back(x, w);
  }
  std::sort(atoms.begin(), atoms.end());

  // Merge until no pair of adjacent positions is closer than merge_tol, so a
  // second application is a no-op.
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<std::pair<double, double>> out;
    for (const auto& [x, w] : atoms) {
      if (!out.empty() && x - out.back().first < merge_tol) {
        auto& [px, pw] = out.back();
        px = (px * pw + x * w) / (pw + w);
        pw += w;
        merged = true;
      } else {
        out.emplace_back(x, w);
      }
    }
    atoms = std::move(out);
  }

  double total = 0.0;
  for (const auto& [x, w] : atoms) total += w;
  if (total <= 0.0) throw ValidationError("normalize_design: empty design");

  Design result;
  for (const auto& [x, w] : atoms) {
    if (w / total < drop_tol) continue;
    result.points.push_back(x);
    result.weights.push_back(w);
  }
  if (result.points.empty()) {
    throw ValidationError("normalize_design: empty design after dropping");
  }
  const double kept = std::accumulate(result.weights.begin(), result.weights.end(), 0.0);
  for (double& w : result.weights) w /= kept;
  validate_design(result, space);
  return result;
}

Eigen::VectorXd ParamVector::full() const {
  Eigen::VectorXd v(dim());
  v(0) = sigma2;
  v.segment(1, vartheta.size()) = vartheta;
  v.tail(gamma.size()) = gamma;
  return v;
}

Eigen::VectorXd ParamVector::mean_params() const {
  Eigen::VectorXd v(vartheta.size() + gamma.size());
  v.head(vartheta.size()) = vartheta;
  v.tail(gamma.size()) = gamma;
  return v;
}

std::string CandidateSubset::label() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i) os << ",";
    os << indices[i];
  }
  os << "}";
  return os.str();
}

void validate_subset(const CandidateSubset& subset, int q) {
  for (size_t i = 0; i < subset.indices.size(); ++i) {
    const int idx = subset.indices[i];
    if (idx < 1 || idx > q) {
      throw ValidationError("candidate subset " + subset.label() + ": index " +
                            std::to_string(idx) + " outside 1.." + std::to_string(q));
    }
    if (i > 0 && subset.indices[i - 1] >= idx) {
      throw ValidationError("candidate subset " + subset.label() +
                            ": indices must be strictly increasing");
    }
  }
}

void validate_scheme(const AveragingScheme& scheme, int q) {
  if (scheme.candidates.empty()) {
    throw ValidationError("averaging scheme: needs at least one candidate");
  }
  if (scheme.candidates.size() != scheme.g_weights.size()) {
    throw ValidationError("averaging scheme: candidates and g_weights must have equal length");
  }
  double sum = 0.0;
  for (double g : scheme.g_weights) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ValidationError("g_weights: must be nonnegative");
    }
    sum += g;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw ValidationError("g_weights: must sum to 1");
  }
  for (size_t i = 0; i < scheme.candidates.size(); ++i) {
    validate_subset(scheme.candidates[i], q);
    for (size_t j = i + 1; j < scheme.candidates.size(); ++j) {
      if (scheme.candidates[i] == scheme.candidates[j]) {
        throw ValidationError("averaging scheme: duplicate candidate subset " +
                              scheme.candidates[i].label());
      }
    }
  }
}

Misspecification Misspecification::from_scaled(const Eigen::VectorXd& delta_over_sqrt_n,
                                               long n) {
  if (n < 1) throw ValidationError("misspecification: n must be >= 1");
  Misspecification m;
  m.n = n;
  m.delta = std::sqrt(static_cast<double>(n)) * delta_over_sqrt_n;
  return m;
}

}  // namespace mavdesign
