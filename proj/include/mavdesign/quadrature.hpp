#ifndef MAVDESIGN_QUADRATURE_HPP
#define MAVDESIGN_QUADRATURE_HPP

#include <vector>

namespace mavdesign {

/// Gauss-Legendre rule on [lo, hi]: nodes and weights for an n-point rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Integrates f over [lo, hi] with a 64-node Gauss-Legendre rule.
template <typename F>
double integrate_gl64(F&& f, double lo, double hi) {
  static thread_local QuadratureRule unit = gauss_legendre(64, -1.0, 1.0);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (size_t i = 0; i < unit.nodes.size(); ++i) {
    sum += unit.weights[i] * f(mid + half * unit.nodes[i]);
  }
  return half * sum;
}

}  // namespace mavdesign

#endif  // MAVDESIGN_QUADRATURE_HPP
