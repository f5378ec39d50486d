#include "mavdesign/simulation.hpp"

#include <cmath>

#include "mavdesign/least_squares.hpp"
#include "mavdesign/parallel.hpp"
#include "mavdesign/rng.hpp"

namespace mavdesign {

namespace {

// Multiplicative +-20% start patterns; parameters at zero get the offset
// additively so they are perturbed at all.
double perturb(double value, double factor) {
  if (std::abs(value) < 1e-8) return value + (factor - 1.0);
  return value * factor;
}

std::vector<Eigen::VectorXd> default_starts(const Eigen::VectorXd& nominal_beta) {
  const int m = static_cast<int>(nominal_beta.size());
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(5);
  starts.push_back(nominal_beta);
  const double patterns[4][2] = {{1.2, 1.2}, {0.8, 0.8}, {1.2, 0.8}, {0.8, 1.2}};
  for (const auto& pattern : patterns) {
    Eigen::VectorXd beta(m);
    for (int i = 0; i < m; ++i) beta(i) = perturb(nominal_beta(i), pattern[i % 2]);
    starts.push_back(beta);
  }
  return starts;
}

}  // namespace

void validate_truth(const ModelFamily& family, const TruthSpec& truth) {
  if (truth.params.vartheta.size() != family.p - 1 || truth.params.gamma.size() != family.q) {
    throw ValidationError("truth: parameter dimensions do not match the family");
  }
  if (!(truth.params.sigma2 >= 0.0) || !std::isfinite(truth.params.sigma2)) {
    throw ValidationError("truth: sigma2 must be finite and nonnegative");
  }
  if (!family.params_admissible(truth.params.vartheta, truth.params.gamma)) {
    throw ValidationError("truth: inadmissible mean parameters");
  }
}

Dataset gen_data(const ModelFamily& family, const TruthSpec& truth,
                 const std::vector<long>& counts, const std::vector<double>& points,
                 std::uint64_t seed) {
  if (counts.size() != points.size()) {
    throw ValidationError("gen_data: counts and points must have equal length");
  }
  const double sigma = std::sqrt(truth.params.sigma2);
  Rng rng(seed);
  Dataset data;
  for (size_t i = 0; i < points.size(); ++i) {
    const double eta = family.mean(points[i], truth.params.vartheta, truth.params.gamma);
    for (long j = 0; j < counts[i]; ++j) {
      data.x.push_back(points[i]);
      data.replicate.push_back(static_cast<int>(j));
      data.y.push_back(eta + sigma * rng.normal());
    }
  }
  return data;
}

FitResult fit_mle(const ModelFamily& family, const Candidate& candidate, const Dataset& data,
                  const ParamVector& nominal, const DesignSpace& space,
                  const std::vector<Eigen::VectorXd>& extra_starts) {
  if (data.size() == 0) throw ValidationError("fit_mle: empty dataset");
  const long n = data.size();
  const Eigen::VectorXd& anchor = family.gamma0;

  LmOptions lm_opts;
  if (family.fit_bounds) {
    const auto [lo, hi] = family.fit_bounds(space);
    const int m = candidate.dim() - 1;
    lm_opts.lower.resize(m);
    lm_opts.upper.resize(m);
    for (int c = 0; c < m; ++c) {
      lm_opts.lower(c) = lo(candidate.mean_selection[c]);
      lm_opts.upper(c) = hi(candidate.mean_selection[c]);
    }
  }

  const ResidualFn residuals = [&](const Eigen::VectorXd& beta, Eigen::VectorXd& r,
                                   Eigen::MatrixXd* jac) {
    const ParamVector point = candidate.embed(1.0, beta, anchor);
    if (!family.params_admissible(point.vartheta, point.gamma)) return false;
    r.resize(n);
    if (jac) jac->resize(n, beta.size());
    for (long i = 0; i < n; ++i) {
      const double eta = family.mean(data.x[i], point.vartheta, point.gamma);
      if (!std::isfinite(eta)) return false;
      r(i) = data.y[i] - eta;
      if (jac) {
        const Eigen::VectorXd g = family.mean_grad
                                      ? family.mean_grad(data.x[i], point.vartheta, point.gamma)
                                      : Eigen::VectorXd();
        if (g.size() == 0) return false;
        for (int c = 0; c < candidate.dim() - 1; ++c) {
          (*jac)(i, c) = -g(candidate.mean_selection[c]);
        }
      }
    }
    return true;
  };

  std::vector<Eigen::VectorXd> starts = default_starts(candidate.free_mean_of(nominal));
  starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());

  LmResult best;
  for (const auto& start : starts) {
    const LmResult run = levenberg_marquardt(residuals, start, lm_opts);
    if (run.rss < best.rss) best = run;
  }
  if (!std::isfinite(best.rss)) {
    throw NumericsError("fit_mle: no admissible start for candidate S=" +
                        candidate.subset.label());
  }

  FitResult fit;
  fit.beta = best.beta;
  fit.rss = best.rss;
  fit.converged = best.converged;
  const double sigma2_hat = std::max(best.rss / n, 1e-8);
  fit.params_hat = candidate.embed(sigma2_hat, best.beta, anchor);
  fit.loglik = -0.5 * n * (std::log(2.0 * M_PI * sigma2_hat) + 1.0);
  fit.aic = 2.0 * fit.loglik - 2.0 * candidate.dim();
  return fit;
}

std::vector<double> smooth_aic_weights(const std::vector<double>& aic_scores) {
  if (aic_scores.empty()) throw ValidationError("smooth_aic_weights: empty score list");
  const double top = *std::max_element(aic_scores.begin(), aic_scores.end());
  std::vector<double> weights(aic_scores.size());
  double sum = 0.0;
  for (size_t i = 0; i < aic_scores.size(); ++i) {
    weights[i] = std::exp(0.5 * aic_scores[i] - 0.5 * top);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
  return weights;
}

int select_aic(const std::vector<double>& aic_scores) {
  if (aic_scores.empty()) throw ValidationError("select_aic: empty score list");
  int best = 0;
  for (size_t i = 1; i < aic_scores.size(); ++i) {
    if (aic_scores[i] > aic_scores[best]) best = static_cast<int>(i);
  }
  return best;
}

double estimate_target(const std::vector<FitResult>& fits, const std::vector<double>& weights,
                       const TargetFunctional& target, const ModelFamily& family,
                       const DesignSpace& space) {
  if (fits.size() != weights.size()) {
    throw ValidationError("estimate_target: fits and weights must have equal length");
  }
  double estimate = 0.0;
  for (size_t j = 0; j < fits.size(); ++j) {
    if (weights[j] == 0.0) continue;
    estimate += weights[j] * eval_target(target, family, space, fits[j].params_hat);
  }
  return estimate;
}

std::string method_name(EstimationMethod method) {
  switch (method) {
    case EstimationMethod::kFixed:
      return "fixed";
    case EstimationMethod::kSmoothAic:
      return "smooth_aic";
    case EstimationMethod::kAicSelect:
      return "aic_select";
  }
  return "?";
}

EstimationMethod method_from_name(const std::string& name) {
  if (name == "fixed") return EstimationMethod::kFixed;
  if (name == "smooth_aic") return EstimationMethod::kSmoothAic;
  if (name == "aic_select") return EstimationMethod::kAicSelect;
  throw ValidationError("unknown estimation method '" + name +
                        "' (expected fixed, smooth_aic or aic_select)");
}

std::vector<MseRow> run_mse_study(const DesignProblem& problem, long n_total,
                                  const ParamVector& nominal,
                                  const std::vector<NamedDesign>& designs,
                                  const std::vector<EstimationMethod>& methods,
                                  const TruthSpec& truth, int truth_id, long reps,
                                  std::uint64_t seed) {
  if (reps < 1) throw ValidationError("run_mse_study: reps must be >= 1");
  if (methods.empty()) throw ValidationError("run_mse_study: empty method list");
  validate_problem(problem);
  validate_truth(problem.family, truth);

  const ModelFamily& family = problem.family;
  const std::vector<Candidate> candidates = build_candidates(family, problem.scheme);
  const int r = static_cast<int>(candidates.size());
  const double mu_true = eval_target(problem.target, family, problem.space, truth.params);

  std::vector<MseRow> rows;
  for (size_t d = 0; d < designs.size(); ++d) {
    const Design& design = designs[d].design;
    validate_design(design, problem.space);
    const std::vector<long> counts = efficient_round(design, n_total);

    struct ReplicateResult {
      std::vector<double> estimate;
      std::vector<bool> valid;
    };
    std::vector<ReplicateResult> slots(reps);

    parallel_for(reps, [&](long l) {
      const std::uint64_t key = substream_key(
          seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(l)});
      const Dataset data = gen_data(family, truth, counts, design.points, key);

      std::vector<FitResult> fits(r);
      std::vector<double> aics(r);
      for (int j = 0; j < r; ++j) {
        // Warm-start supersets from nested fits; keeps the likelihood ordering
        // of nested models exact.
        std::vector<Eigen::VectorXd> extra;
        for (int i = 0; i < j; ++i) {
          if (std::includes(candidates[j].subset.indices.begin(),
                            candidates[j].subset.indices.end(),
                            candidates[i].subset.indices.begin(),
                            candidates[i].subset.indices.end())) {
            extra.push_back(candidates[j].free_mean_of(fits[i].params_hat));
          }
        }
        fits[j] = fit_mle(family, candidates[j], data, nominal, problem.space, extra);
        aics[j] = fits[j].aic;
      }

      std::vector<double> mu_hat(r);
      std::vector<bool> mu_ok(r, false);
      for (int j = 0; j < r; ++j) {
        try {
          mu_hat[j] = eval_target(problem.target, family, problem.space, fits[j].params_hat);
          mu_ok[j] = std::isfinite(mu_hat[j]);
        } catch (const std::exception&) {
          mu_ok[j] = false;
        }
      }

      ReplicateResult& slot = slots[l];
      slot.estimate.resize(methods.size(), 0.0);
      slot.valid.resize(methods.size(), false);
      for (size_t m = 0; m < methods.size(); ++m) {
        std::vector<double> weights(r, 0.0);
        switch (methods[m]) {
          case EstimationMethod::kFixed:
            weights = problem.scheme.g_weights;
            break;
          case EstimationMethod::kSmoothAic:
            weights = smooth_aic_weights(aics);
            break;
          case EstimationMethod::kAicSelect:
            weights[select_aic(aics)] = 1.0;
            break;
        }
        bool ok = true;
        double estimate = 0.0;
        for (int j = 0; j < r; ++j) {
          if (weights[j] == 0.0) continue;
          if (!mu_ok[j] || !fits[j].converged) {
            ok = false;
            break;
          }
          estimate += weights[j] * mu_hat[j];
        }
        slot.valid[m] = ok;
        slot.estimate[m] = estimate;
      }
    });

    for (size_t m = 0; m < methods.size(); ++m) {
      double sum = 0.0;
      long n_valid = 0;
      for (long l = 0; l < reps; ++l) {
        if (!slots[l].valid[m]) continue;
        const double err = slots[l].estimate[m] - mu_true;
        sum += err * err;
        ++n_valid;
      }
      MseRow row;
      row.design = designs[d].name;
      row.method = method_name(methods[m]);
      row.truth_id = truth_id;
      row.reps = reps;
      row.mse = n_valid > 0 ? sum / n_valid : std::numeric_limits<double>::quiet_NaN();
      row.n_invalid = reps - n_valid;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace mavdesign
