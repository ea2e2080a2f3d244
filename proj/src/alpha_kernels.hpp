#pragma once

// Event-supremum kernels shared by the alpha module and the benchmark.

#include <cstdint>
#include <utility>
#include <vector>

#include "depbound/dist.hpp"

namespace depbound::detail {

/// Joint law of two disjoint variable groups over their positive cells.
struct Contingency {
  std::vector<double> row_mass;
  std::vector<double> col_mass;
  /// rows[r] = sparse list of (column, P(r, c)), columns ascending.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  std::size_t num_rows() const { return row_mass.size(); }
  std::size_t num_cols() const { return col_mass.size(); }
};

Contingency make_contingency(const JointDistribution& dist, const IndexSet& left, const IndexSet& right);
Contingency transpose(const Contingency& table);

/// max over row subsets B of (1/2) sum_c |P(B, c) - P(B) P(c)|.
/// Serial reference: one Gray-code walk over all subsets that leave out the
/// last row (complements give the same value).
double event_sup_serial(const Contingency& table);

/// Same value, computed by OpenMP workers over fixed-size Gray-code chunks;
/// the chunking does not depend on the worker count.
double event_sup_parallel(const Contingency& table);

}  // namespace depbound::detail
