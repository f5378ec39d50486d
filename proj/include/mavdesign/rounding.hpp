#ifndef MAVDESIGN_ROUNDING_HPP
#define MAVDESIGN_ROUNDING_HPP

#include <vector>

#include "mavdesign/types.hpp"

namespace mavdesign {

/// Efficient rounding of design weights into replication counts summing to n.
/// Starts from n_i = ceil((n - k/2) * xi_i); surpluses are removed from the
/// index minimizing xi_j / (n_j - 1) among n_j >= 2 (ties to the largest
/// index), shortfalls added at the index maximizing xi_j / n_j (ties to the
/// smallest index). Requires n >= k; every count stays >= 1.
std::vector<long> efficient_round(const Design& design, long n);

}  // namespace mavdesign

#endif  // MAVDESIGN_ROUNDING_HPP
