#include "mavdesign/family.hpp"

#include <cmath>

namespace mavdesign {

namespace {

// x^g with the zero-dose convention 0^g := 0 for g > 0.
double power_term(double x, double g) {
  if (x == 0.0) return 0.0;
  return std::pow(x, g);
}

double emax_mean(double x, const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  const double u = power_term(x, gm(1));
  const double v = std::pow(vt(1), gm(1));
  return gm(0) + vt(0) * u / (u + v);
}

Eigen::VectorXd emax_grad(double x, const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  Eigen::VectorXd g(4);
  const double u = power_term(x, gm(1));
  const double v = std::pow(vt(1), gm(1));
  const double denom = (u + v) * (u + v);
  g(0) = u / (u + v);
  g(1) = -vt(0) * u * gm(1) * std::pow(vt(1), gm(1) - 1.0) / denom;
  g(2) = 1.0;
  // x^g * log x -> 0 as x -> 0+, so the Hill component vanishes at zero dose.
  g(3) = (x == 0.0) ? 0.0 : vt(0) * u * v * (std::log(x) - std::log(vt(1))) / denom;
  return g;
}

double logistic_mean(double x, const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  const double t = (vt(1) - x) / gm(1);
  return gm(0) + vt(0) / (1.0 + std::exp(t));
}

Eigen::VectorXd logistic_grad(double x, const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  Eigen::VectorXd g(4);
  const double t = (vt(1) - x) / gm(1);
  const double s = 1.0 / (1.0 + std::exp(t));  // saturates cleanly on overflow
  const double sds = s * (1.0 - s);
  g(0) = s;
  g(1) = -vt(0) * sds / gm(1);
  g(2) = 1.0;
  g(3) = vt(0) * sds * t / gm(1);
  return g;
}

bool positive_shape(const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  return vt(1) > 0.0 && gm(1) > 0.0;
}

// Conventional dose-response fitting boxes, scaled by the dose interval:
// the half-effect dose stays below 1.5x the top dose, slope parameters in a
// fixed plausible range. Linear parameters are free.
std::pair<Eigen::VectorXd, Eigen::VectorXd> emax_bounds(const DesignSpace& space) {
  const double inf = std::numeric_limits<double>::infinity();
  const double top = space.lower + space.length();
  Eigen::Vector4d lo(-inf, 1e-3 * space.length(), -inf, 0.5);
  Eigen::Vector4d hi(inf, 1.5 * top, inf, 10.0);
  return {lo, hi};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> logistic_bounds(const DesignSpace& space) {
  const double inf = std::numeric_limits<double>::infinity();
  const double top = space.lower + space.length();
  Eigen::Vector4d lo(-inf, 1e-3 * space.length(), -inf, 0.01 * space.length());
  Eigen::Vector4d hi(inf, 1.5 * top, inf, 0.5 * space.length());
  return {lo, hi};
}

Eigen::VectorXd finite_diff_grad(const ModelFamily& family, double x,
                                 const Eigen::VectorXd& vt, const Eigen::VectorXd& gm) {
  const int nv = static_cast<int>(vt.size());
  const int ng = static_cast<int>(gm.size());
  Eigen::VectorXd g(nv + ng);
  Eigen::VectorXd v = vt, m = gm;
  for (int i = 0; i < nv + ng; ++i) {
    double& slot = i < nv ? v(i) : m(i - nv);
    const double base = slot;
    const double h = 1e-6 * std::max(1.0, std::abs(base));
    slot = base + h;
    const double up = family.mean(x, v, m);
    slot = base - h;
    const double down = family.mean(x, v, m);
    slot = base;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

ModelFamily sigmoid_emax_family() {
  ModelFamily f;
  f.name = "sigmoid_emax";
  f.p = 3;
  f.q = 2;
  f.gamma0 = Eigen::Vector2d(0.0, 1.0);
  f.mean = emax_mean;
  f.mean_grad = emax_grad;
  f.admissible = positive_shape;
  f.fit_bounds = emax_bounds;
  return f;
}

ModelFamily logistic4_family() {
  ModelFamily f;
  f.name = "logistic4";
  f.p = 3;
  f.q = 2;
  f.gamma0 = Eigen::Vector2d(0.0, 1.0);
  f.mean = logistic_mean;
  f.mean_grad = logistic_grad;
  f.admissible = positive_shape;
  f.fit_bounds = logistic_bounds;
  return f;
}

ModelFamily family_by_id(const std::string& id) {
  if (id == "sigmoid_emax") return sigmoid_emax_family();
  if (id == "logistic4") return logistic4_family();
  throw ValidationError("family: unknown identifier '" + id +
                        "' (expected sigmoid_emax or logistic4)");
}

void validate_params(const ModelFamily& family, const ParamVector& params) {
  if (!(params.sigma2 > 0.0) || !std::isfinite(params.sigma2)) {
    throw ValidationError("params: sigma2 must be positive");
  }
  if (params.vartheta.size() != family.p - 1) {
    throw ValidationError("params: vartheta must have length " + std::to_string(family.p - 1));
  }
  if (params.gamma.size() != family.q) {
    throw ValidationError("params: gamma must have length " + std::to_string(family.q));
  }
}

double mean_eta(const ModelFamily& family, double x, const DesignSpace& space,
                const ParamVector& params) {
  if (!space.contains(x)) {
    throw DomainError("mean_eta: x = " + std::to_string(x) + " outside design space");
  }
  if (!family.params_admissible(params.vartheta, params.gamma)) {
    throw DomainError("mean_eta: inadmissible parameters for family " + family.name);
  }
  return family.mean(x, params.vartheta, params.gamma);
}

Eigen::VectorXd grad_eta(const ModelFamily& family, double x, const DesignSpace& space,
                         const ParamVector& params) {
  if (!space.contains(x)) {
    throw DomainError("grad_eta: x = " + std::to_string(x) + " outside design space");
  }
  if (!family.params_admissible(params.vartheta, params.gamma)) {
    throw DomainError("grad_eta: inadmissible parameters for family " + family.name);
  }
  if (family.mean_grad) return family.mean_grad(x, params.vartheta, params.gamma);
  return finite_diff_grad(family, x, params.vartheta, params.gamma);
}

}  // namespace mavdesign
