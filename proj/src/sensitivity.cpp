#include "mavdesign/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace mavdesign {

namespace {

// Wraps a single candidate into a degenerate problem so the evaluator's
// context machinery can serve the candidate-level h~ query.
DesignProblem single_candidate_problem(const ModelFamily& family, const Candidate& candidate,
                                       const TargetFunctional& target,
                                       const DesignSpace& space) {
  DesignProblem problem;
  problem.family = family;
  problem.scheme.candidates = {candidate.subset};
  problem.scheme.g_weights = {1.0};
  problem.target = target;
  problem.space = space;
  problem.misspec.delta = Eigen::VectorXd::Zero(family.q);
  problem.misspec.n = 1;
  return problem;
}

}  // namespace

Eigen::VectorXd h_tilde(const ModelFamily& family, const Candidate& candidate,
                        const Design& design, double x, const ParamVector& params,
                        const TargetFunctional& target, const DesignSpace& space) {
  validate_design(design, space);
  const DesignProblem problem = single_candidate_problem(family, candidate, target, space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  const auto ctx = eval.prepare(design);
  return eval.h_tilde(ctx, 0, 0, x);
}

double d1(const DesignProblem& problem, const Design& design, double x,
          const ParamVector& params) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  const auto ctx = eval.prepare(design);
  return eval.d1_atom(ctx, 0, x);
}

double d2(const DesignProblem& problem, const Design& design, double x,
          const ParamVector& params) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  const auto ctx = eval.prepare(design);
  return eval.d2_atom(ctx, 0, x);
}

double d_pi(const DesignProblem& problem, const Design& design, double x,
            const PriorSpec& prior) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, prior);
  const auto ctx = eval.prepare(design);
  return eval.d_pi(ctx, x);
}

SensitivityReport check_optimality(const CriterionEvaluator& eval, const Design& design,
                                   int grid_size, double tol) {
  if (grid_size < 2) throw ValidationError("check_optimality: grid_size must be >= 2");
  validate_design(design, eval.problem().space);
  const DesignSpace& space = eval.problem().space;
  const auto ctx = eval.prepare(design);

  SensitivityReport rep;
  rep.tol = tol;
  rep.phi = ctx.phi;
  rep.grid.reserve(grid_size + design.k());
  const double step = space.length() / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    rep.grid.push_back(i == grid_size - 1 ? space.upper : space.lower + i * step);
  }
  for (double x : design.points) rep.grid.push_back(x);

  rep.d_values.reserve(rep.grid.size());
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (double x : rep.grid) {
    const double d = eval.d_pi(ctx, x);
    rep.d_values.push_back(d);
    rep.max_violation = std::max(rep.max_violation, d);
  }
  for (int i = 0; i < design.k(); ++i) {
    rep.support_residuals.push_back(rep.d_values[grid_size + i]);
  }
  rep.passed = rep.max_violation <= tol &&
               std::all_of(rep.support_residuals.begin(), rep.support_residuals.end(),
                           [&](double r) { return std::abs(r) <= tol; });
  return rep;
}

SensitivityReport check_optimality(const DesignProblem& problem, const Design& design,
                                   const PriorSpec& prior, int grid_size, double tol) {
  const CriterionEvaluator eval(problem, prior);
  return check_optimality(eval, design, grid_size, tol);
}

}  // namespace mavdesign
