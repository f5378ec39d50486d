#include "mavdesign/target.hpp"

#include <cmath>

#include "mavdesign/quadrature.hpp"

namespace mavdesign {

namespace {

constexpr int kEdGridSize = 512;
constexpr double kEdBisectTol = 1e-10;
constexpr double kFlatEffectTol = 1e-12;

double solve_ed(const TargetFunctional& target, const ModelFamily& family,
                const DesignSpace& space, const ParamVector& params) {
  const double a = space.lower, b = space.upper;
  const double eta_a = mean_eta(family, a, space, params);
  const double eta_b = mean_eta(family, b, space, params);
  const double span = eta_b - eta_a;
  if (std::abs(span) < kFlatEffectTol) {
    throw NumericsError("ED: effect curve is flat over the design space (" +
                        target.label() + ")");
  }
  const auto effect = [&](double x) {
    return (mean_eta(family, x, space, params) - eta_a) / span;
  };

  // First grid point reaching the threshold, then bisect the bracket below it.
  const double step = (b - a) / (kEdGridSize - 1);
  int hit = -1;
  for (int i = 0; i < kEdGridSize; ++i) {
    const double x = (i == kEdGridSize - 1) ? b : a + i * step;
    const double e = effect(x);
    if (!std::isfinite(e)) {
      throw NumericsError("ED: non-finite effect at x = " + std::to_string(x));
    }
    if (e >= target.alpha) {
      hit = i;
      break;
    }
  }
  if (hit < 0) {
    throw NumericsError("ED: threshold alpha = " + std::to_string(target.alpha) +
                        " not attained on the grid");
  }
  if (hit == 0) return a;

  double lo = a + (hit - 1) * step;
  double hi = (hit == kEdGridSize - 1) ? b : a + hit * step;
  while (hi - lo > kEdBisectTol) {
    const double mid = 0.5 * (lo + hi);
    if (effect(mid) >= target.alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

TargetFunctional TargetFunctional::auc(double lo, double hi) {
  TargetFunctional t;
  t.kind = Kind::kAuc;
  t.region_lo = lo;
  t.region_hi = hi;
  return t;
}

TargetFunctional TargetFunctional::ed(double alpha) {
  TargetFunctional t;
  t.kind = Kind::kEd;
  t.alpha = alpha;
  return t;
}

TargetFunctional TargetFunctional::point_mean(double x0) {
  TargetFunctional t;
  t.kind = Kind::kPointMean;
  t.x0 = x0;
  return t;
}

std::string TargetFunctional::label() const {
  switch (kind) {
    case Kind::kAuc:
      return "AUC[" + std::to_string(region_lo) + "," + std::to_string(region_hi) + "]";
    case Kind::kEd:
      return "ED_" + std::to_string(alpha);
    case Kind::kPointMean:
      return "POINT(" + std::to_string(x0) + ")";
  }
  return "?";
}

void validate_target(const TargetFunctional& target, const DesignSpace& space) {
  switch (target.kind) {
    case TargetFunctional::Kind::kAuc:
      if (!(target.region_lo < target.region_hi) || target.region_lo < space.lower ||
          target.region_hi > space.upper) {
        throw ValidationError("target: AUC region must be a nonempty subinterval of the "
                              "design space");
      }
      break;
    case TargetFunctional::Kind::kEd:
      if (!(target.alpha > 0.0) || !(target.alpha < 1.0)) {
        throw ValidationError("target: ED alpha must lie strictly in (0,1)");
      }
      break;
    case TargetFunctional::Kind::kPointMean:
      if (!space.contains(target.x0)) {
        throw ValidationError("target: x0 outside design space");
      }
      break;
  }
}

double eval_target(const TargetFunctional& target, const ModelFamily& family,
                   const DesignSpace& space, const ParamVector& params) {
  switch (target.kind) {
    case TargetFunctional::Kind::kAuc:
      return integrate_gl64(
          [&](double x) { return mean_eta(family, x, space, params); },
          target.region_lo, target.region_hi);
    case TargetFunctional::Kind::kEd:
      return solve_ed(target, family, space, params);
    case TargetFunctional::Kind::kPointMean:
      return mean_eta(family, target.x0, space, params);
  }
  throw NumericsError("eval_target: unknown target kind");
}

Eigen::VectorXd target_grad_full(const TargetFunctional& target, const ModelFamily& family,
                                 const DesignSpace& space, const ParamVector& params) {
  const int dim = family.p + family.q;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);

  if (target.kind == TargetFunctional::Kind::kAuc) {
    const int nm = family.n_mean_params();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nm);
    static thread_local QuadratureRule unit = gauss_legendre(64, -1.0, 1.0);
    const double mid = 0.5 * (target.region_lo + target.region_hi);
    const double half = 0.5 * (target.region_hi - target.region_lo);
    for (size_t i = 0; i < unit.nodes.size(); ++i) {
      acc += half * unit.weights[i] * grad_eta(family, mid + half * unit.nodes[i], space, params);
    }
    grad.tail(nm) = acc;
    return grad;
  }

  if (target.kind == TargetFunctional::Kind::kPointMean) {
    grad.tail(family.n_mean_params()) = grad_eta(family, target.x0, space, params);
    return grad;
  }

  // ED: none of the targets depend on sigma2, so component 0 stays zero.
  ParamVector perturbed = params;
  for (int i = 1; i < dim; ++i) {
    double& slot = (i < family.p) ? perturbed.vartheta(i - 1) : perturbed.gamma(i - family.p);
    const double base = slot;
    const double h = 1e-5 * std::max(1.0, std::abs(base));
    slot = base + h;
    const double up = eval_target(target, family, space, perturbed);
    slot = base - h;
    const double down = eval_target(target, family, space, perturbed);
    slot = base;
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

Eigen::VectorXd target_grad_sub(const TargetFunctional& target, const ModelFamily& family,
                                const DesignSpace& space, const Candidate& candidate,
                                const ParamVector& params) {
  return candidate.select(target_grad_full(target, family, space, params));
}

}  // namespace mavdesign
