#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace depbound {

struct CoveringLpResult {
  /// Primal weights, one per input set.
  std::vector<double> weights;
  /// Dual packing values, one per element.
  std::vector<double> packing;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::size_t iterations = 0;
};

/// Solves  min sum_j w_j  s.t.  sum_{j : i in S_j} w_j >= 1 for every element
/// i < k,  w >= 0,  where each set S_j is a bitmask over [k].
///
/// The dense simplex runs on the packing dual (max sum_i y_i, sum_{i in S_j}
/// y_i <= 1), whose slack basis is feasible at the origin; the primal weights
/// are read off the final reduced costs. Bland's rule prevents cycling.
/// Throws LpDidNotConverge if the iteration limit is hit or the primal/dual
/// gap exceeds `gap_tolerance`, and BlocksDoNotCover if some element is in no
/// set.
CoveringLpResult solve_covering_lp(std::size_t k, const std::vector<std::uint64_t>& sets,
                                   double gap_tolerance = 1e-9);

}  // namespace depbound
