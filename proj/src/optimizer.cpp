#include "mavdesign/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "mavdesign/parallel.hpp"
#include "mavdesign/rng.hpp"

namespace mavdesign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Free coordinates of a k-point design: the k support points followed by the
// first k-1 weights; the last weight is implied by the simplex.
struct Packed {
  Eigen::VectorXd z;
  int k = 0;
};

Packed pack(const Design& d) {
  Packed p;
  p.k = d.k();
  p.z.resize(2 * p.k - 1);
  for (int i = 0; i < p.k; ++i) p.z(i) = d.points[i];
  for (int i = 0; i + 1 < p.k; ++i) p.z(p.k + i) = d.weights[i];
  return p;
}

void unpack(const Packed& p, std::vector<double>& pts, std::vector<double>& wts) {
  pts.resize(p.k);
  wts.resize(p.k);
  double used = 0.0;
  for (int i = 0; i < p.k; ++i) pts[i] = p.z(i);
  for (int i = 0; i + 1 < p.k; ++i) {
    wts[i] = p.z(p.k + i);
    used += wts[i];
  }
  wts[p.k - 1] = 1.0 - used;
}

// Euclidean projection onto {w >= 0, sum w <= 1}: clamp, and if the clamped
// vector still exceeds the simplex, project onto {w >= 0, sum w = 1}.
void project_weights(Eigen::Ref<Eigen::VectorXd> w) {
  const int m = static_cast<int>(w.size());
  double clamped_sum = 0.0;
  for (int i = 0; i < m; ++i) clamped_sum += std::max(w(i), 0.0);
  if (clamped_sum <= 1.0) {
    for (int i = 0; i < m; ++i) w(i) = std::max(w(i), 0.0);
    return;
  }
  std::vector<double> u(w.data(), w.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0, tau = 0.0;
  for (int j = 0; j < m; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / (j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  for (int i = 0; i < m; ++i) w(i) = std::max(w(i) - tau, 0.0);
}

class LocalSearch {
 public:
  LocalSearch(const CriterionEvaluator& eval, const DesignSpace& space, int k)
      : eval_(eval), space_(space), k_(k) {}

  double objective(const Eigen::VectorXd& z, long& evals) const {
    ++evals;
    Packed p{z, k_};
    std::vector<double> pts, wts;
    unpack(p, pts, wts);
    try {
      const double f = eval_.phi(pts, wts);
      return std::isfinite(f) ? f : kInf;
    } catch (const SingularInfoError&) {
      return kInf;
    } catch (const DomainError&) {
      return kInf;
    }
  }

  void project(Eigen::Ref<Eigen::VectorXd> z) const {
    for (int i = 0; i < k_; ++i) {
      z(i) = std::clamp(z(i), space_.lower, space_.upper);
    }
    if (k_ > 1) project_weights(z.segment(k_, k_ - 1));
  }

  // Gradient of Phi^pi on the design manifold, obtained from the sensitivity
  // function: moving weight toward point i changes Phi at rate -d_pi(x_i),
  // and moving point i at rate -w_i d_pi'(x_i).
  bool gradient(const Eigen::VectorXd& z, Eigen::VectorXd& grad, long& evals) const {
    Packed p{z, k_};
    std::vector<double> pts, wts;
    unpack(p, pts, wts);
    Design d{pts, wts};
    CriterionEvaluator::Context ctx;
    try {
      ++evals;
      ctx = eval_.prepare(d);
    } catch (const SingularInfoError&) {
      return false;
    } catch (const DomainError&) {
      return false;
    }
    grad.resize(2 * k_ - 1);
    const double h = 1e-7 * space_.length();
    for (int i = 0; i < k_; ++i) {
      const double hi = std::min(pts[i] + h, space_.upper);
      const double lo = std::max(pts[i] - h, space_.lower);
      const double slope = (eval_.d_pi(ctx, hi) - eval_.d_pi(ctx, lo)) / (hi - lo);
      grad(i) = -wts[i] * slope;
    }
    if (k_ > 1) {
      const double d_last = eval_.d_pi(ctx, pts[k_ - 1]);
      for (int i = 0; i + 1 < k_; ++i) {
        grad(k_ + i) = -(eval_.d_pi(ctx, pts[i]) - d_last);
      }
    }
    return grad.allFinite();
  }

  // Projected descent with a trust radius in scaled coordinates (points are
  // measured in units of the interval length, weights as-is).
  double run(Eigen::VectorXd& z, double f, long budget, long& evals) const {
    Eigen::VectorXd scale(2 * k_ - 1);
    scale.head(k_).setConstant(space_.length());
    if (k_ > 1) scale.tail(k_ - 1).setOnes();

    double radius = 0.1;
    Eigen::VectorXd grad;
    while (evals < budget && radius > 1e-11) {
      if (!gradient(z, grad, evals)) break;
      const double gnorm = (grad.array() * scale.array()).abs().maxCoeff();
      if (!(gnorm > 1e-14 * std::max(1.0, std::abs(f)))) break;
      double t = radius / gnorm;
      bool accepted = false;
      for (int attempt = 0; attempt < 12 && evals < budget; ++attempt) {
        Eigen::VectorXd trial = z - t * (grad.array() * scale.array().square()).matrix();
        project(trial);
        const double f_trial = objective(trial, evals);
        if (f_trial < f - 1e-13 * std::max(1.0, std::abs(f))) {
          z = trial;
          f = f_trial;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (accepted) {
        radius = std::min(radius * 1.6, 0.2);
      } else {
        radius *= 0.25;
      }
    }
    return f;
  }

 private:
  const CriterionEvaluator& eval_;
  const DesignSpace& space_;
  int k_;
};

struct StartOutcome {
  int index = 0;
  double phi = kInf;
  Eigen::VectorXd z;
};

Design to_design(const Eigen::VectorXd& z, int k) {
  Packed p{z, k};
  std::vector<double> pts, wts;
  unpack(p, pts, wts);
  return Design{pts, wts};
}

}  // namespace

OptimResult optimize_design(const DesignProblem& problem, const PriorSpec& prior,
                            const OptimizerOptions& opts) {
  const CriterionEvaluator eval(problem, prior);
  const DesignSpace& space = problem.space;
  const int dim = problem.family.p + problem.family.q;
  const int k_init = opts.k_init > 0 ? opts.k_init : dim;
  const int max_k = opts.max_k > 0 ? opts.max_k : dim + 3;
  if (k_init < 1 || k_init > max_k) {
    throw ValidationError("optimizer: need 1 <= k_init <= max_k");
  }
  if (opts.n_starts < 1) throw ValidationError("optimizer: n_starts must be >= 1");
  const double merge_tol = opts.merge_tol > 0 ? opts.merge_tol : 1e-3 * space.length();

  std::vector<StartOutcome> outcomes(opts.n_starts);
  parallel_for(opts.n_starts, [&](long s) {
    Rng rng(substream_key(opts.rng_seed, {0x5741u, static_cast<std::uint64_t>(s)}));
    Eigen::VectorXd z(2 * k_init - 1);
    for (int i = 0; i < k_init; ++i) {
      z(i) = space.lower + space.length() * (i + rng.uniform01()) / k_init;
    }
    if (k_init > 1) {
      Eigen::VectorXd e(k_init);
      for (int i = 0; i < k_init; ++i) e(i) = rng.exponential();
      e /= e.sum();
      z.tail(k_init - 1) = e.head(k_init - 1);
    }
    LocalSearch search(eval, space, k_init);
    long evals = 0;
    double f = search.objective(z, evals);
    if (std::isfinite(f)) {
      f = search.run(z, f, opts.max_evals_per_start, evals);
    }
    outcomes[s] = {static_cast<int>(s), f, z};
  });

  const StartOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    if (!std::isfinite(o.phi)) continue;
    if (!best || o.phi < best->phi) best = &o;
  }
  if (!best) {
    throw NumericsError("optimize_design: every start hit singular information");
  }

  OptimResult result;
  for (const auto& o : outcomes) result.trace.emplace_back(o.index, o.phi);

  // Polish the winner with a fresh budget, then verify; on a failed check
  // grow the support at the grid argmax of d_pi while room remains.
  Eigen::VectorXd z = best->z;
  {
    LocalSearch search(eval, space, k_init);
    long evals = 0;
    double f = best->phi;
    f = search.run(z, f, opts.max_evals_per_start, evals);
  }
  Design design = normalize_design(to_design(z, k_init), space, merge_tol, opts.drop_tol);
  double phi = eval.phi(design);

  while (true) {
    const SensitivityReport rep =
        check_optimality(eval, design, opts.grid_size, opts.eq_tol * phi);
    if (rep.passed || design.k() >= max_k) {
      result.design = design;
      result.phi = phi;
      result.sensitivity = rep;
      result.converged = rep.passed;
      break;
    }
    // Insert mass where d_pi is most positive; reuse the verification grid.
    int arg = 0;
    for (size_t i = 1; i < rep.grid.size(); ++i) {
      if (rep.d_values[i] > rep.d_values[arg]) arg = static_cast<int>(i);
    }
    Design grown = design;
    for (double& w : grown.weights) w *= 0.95;
    grown.points.push_back(rep.grid[arg]);
    grown.weights.push_back(0.05);
    std::vector<int> order(grown.k());
    for (int i = 0; i < grown.k(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return grown.points[a] < grown.points[b]; });
    Design sorted;
    for (int idx : order) {
      sorted.points.push_back(grown.points[idx]);
      sorted.weights.push_back(grown.weights[idx]);
    }

    const int k_grown = sorted.k();
    Packed packed = pack(sorted);
    LocalSearch search(eval, space, k_grown);
    long evals = 0;
    double f = search.objective(packed.z, evals);
    if (std::isfinite(f)) {
      f = search.run(packed.z, f, opts.max_evals_per_start, evals);
    }
    Design refined =
        normalize_design(to_design(packed.z, k_grown), space, merge_tol, opts.drop_tol);
    const double phi_refined = eval.phi(refined);
    if (!(phi_refined < phi)) {
      // Insertion did not help; report the pre-insertion design honestly.
      result.design = design;
      result.phi = phi;
      result.sensitivity = rep;
      result.converged = rep.passed;
      break;
    }
    design = refined;
    phi = phi_refined;
  }
  return result;
}

std::vector<ComparisonRow> evaluate_and_compare(const std::vector<NamedDesign>& designs,
                                                const DesignProblem& problem,
                                                const PriorSpec& prior) {
  if (designs.empty()) throw ValidationError("evaluate_and_compare: no designs given");
  const CriterionEvaluator eval(problem, prior);
  std::vector<ComparisonRow> rows;
  rows.reserve(designs.size());
  double best = kInf;
  for (const auto& nd : designs) {
    ComparisonRow row;
    row.name = nd.name;
    try {
      validate_design(nd.design, problem.space);
      row.phi = eval.phi(nd.design);
      best = std::min(best, row.phi);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (std::isfinite(best)) {
    for (auto& row : rows) {
      if (row.error.empty()) row.efficiency = best / row.phi;
    }
  }
  return rows;
}

}  // namespace mavdesign
