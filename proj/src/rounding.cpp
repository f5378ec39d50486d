#include "mavdesign/rounding.hpp"

#include <cmath>
#include <numeric>

namespace mavdesign {

std::vector<long> efficient_round(const Design& design, long n) {
  const int k = design.k();
  if (k < 1) throw ValidationError("efficient_round: empty design");
  if (design.points.size() != design.weights.size()) {
    throw ValidationError("efficient_round: points and weights must have equal length");
  }
  if (n < k) {
    throw ValidationError("efficient_round: n = " + std::to_string(n) +
                          " below the number of support points k = " + std::to_string(k));
  }
  const auto& xi = design.weights;

  std::vector<long> counts(k);
  for (int i = 0; i < k; ++i) {
    counts[i] = static_cast<long>(std::ceil((n - 0.5 * k) * xi[i]));
  }

  long total = std::accumulate(counts.begin(), counts.end(), 0L);
  while (total < n) {
    int best = 0;
    for (int j = 1; j < k; ++j) {
      if (xi[j] / counts[j] > xi[best] / counts[best]) best = j;  // ties keep smallest index
    }
    ++counts[best];
    ++total;
  }
  while (total > n) {
    int best = -1;
    for (int j = 0; j < k; ++j) {
      if (counts[j] < 2) continue;
      if (best < 0 || xi[j] / (counts[j] - 1) <= xi[best] / (counts[best] - 1)) {
        best = j;  // ties move to the largest index
      }
    }
    if (best < 0) throw NumericsError("efficient_round: cannot reduce counts below 1");
    --counts[best];
    --total;
  }
  return counts;
}

}  // namespace mavdesign
