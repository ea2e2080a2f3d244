#include "alpha_kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace depbound::detail {

namespace {

std::vector<std::uint64_t> group_strides(const JointDistribution& dist, const IndexSet& group) {
  std::vector<std::uint64_t> strides(group.size(), 1);
  for (std::size_t j = group.size(); j-- > 1;) strides[j - 1] = strides[j] * dist.radix(group[j]);
  return strides;
}

std::uint64_t group_code(const JointDistribution& dist, std::uint64_t code, const IndexSet& group,
                         const std::vector<std::uint64_t>& strides) {
  std::uint64_t c = 0;
  for (std::size_t j = 0; j < group.size(); ++j) c += dist.index_of(code, group[j]) * strides[j];
  return c;
}

std::uint32_t compact_index(const std::vector<std::uint64_t>& sorted, std::uint64_t code) {
  return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), code) - sorted.begin());
}

void add_row(std::vector<double>& acc, const std::vector<std::pair<std::uint32_t, double>>& row, double sign) {
  for (const auto& [c, p] : row) acc[c] += sign * p;
}

double deviation(const std::vector<double>& acc, double mass, const std::vector<double>& col_mass) {
  double s = 0.0;
  for (std::size_t c = 0; c < acc.size(); ++c) s += std::abs(acc[c] - mass * col_mass[c]);
  return 0.5 * s;
}

// Walks Gray codes g(i) = i ^ (i >> 1) for i in [begin, end) over the first
// num_rows - 1 rows.
double gray_walk(const Contingency& t, std::uint64_t begin, std::uint64_t end) {
  std::vector<double> acc(t.num_cols(), 0.0);
  double mass = 0.0;
  const std::uint64_t g0 = begin ^ (begin >> 1);
  for (std::size_t r = 0; r + 1 < t.num_rows(); ++r) {
    if ((g0 >> r) & 1U) {
      add_row(acc, t.rows[r], 1.0);
      mass += t.row_mass[r];
    }
  }
  double best = deviation(acc, mass, t.col_mass);
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    const auto r = static_cast<std::size_t>(std::countr_zero(i));
    const bool entering = ((i ^ (i >> 1)) >> r) & 1U;
    const double sign = entering ? 1.0 : -1.0;
    add_row(acc, t.rows[r], sign);
    mass += sign * t.row_mass[r];
    best = std::max(best, deviation(acc, mass, t.col_mass));
  }
  return best;
}

}  // namespace

Contingency make_contingency(const JointDistribution& dist, const IndexSet& left, const IndexSet& right) {
  const auto ls = group_strides(dist, left);
  const auto rs = group_strides(dist, right);

  std::vector<std::uint64_t> lcodes, rcodes;
  lcodes.reserve(dist.entries().size());
  rcodes.reserve(dist.entries().size());
  for (const auto& e : dist.entries()) {
    lcodes.push_back(group_code(dist, e.code, left, ls));
    rcodes.push_back(group_code(dist, e.code, right, rs));
  }
  auto lsorted = lcodes, rsorted = rcodes;
  std::sort(lsorted.begin(), lsorted.end());
  lsorted.erase(std::unique(lsorted.begin(), lsorted.end()), lsorted.end());
  std::sort(rsorted.begin(), rsorted.end());
  rsorted.erase(std::unique(rsorted.begin(), rsorted.end()), rsorted.end());

  Contingency t;
  t.row_mass.assign(lsorted.size(), 0.0);
  t.col_mass.assign(rsorted.size(), 0.0);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> raw(lsorted.size());
  const auto entries = dist.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto r = compact_index(lsorted, lcodes[i]);
    const auto c = compact_index(rsorted, rcodes[i]);
    t.row_mass[r] += entries[i].p;
    t.col_mass[c] += entries[i].p;
    raw[r].emplace_back(c, entries[i].p);
  }
  for (auto& row : raw) {
    std::sort(row.begin(), row.end());
    std::vector<std::pair<std::uint32_t, double>> merged;
    for (const auto& cell : row) {
      if (!merged.empty() && merged.back().first == cell.first) {
        merged.back().second += cell.second;
      } else {
        merged.push_back(cell);
      }
    }
    row = std::move(merged);
  }
  t.rows = std::move(raw);
  return t;
}

Contingency transpose(const Contingency& table) {
  Contingency t;
  t.row_mass = table.col_mass;
  t.col_mass = table.row_mass;
  t.rows.resize(table.num_cols());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (const auto& [c, p] : table.rows[r]) t.rows[c].emplace_back(static_cast<std::uint32_t>(r), p);
  }
  return t;
}

double event_sup_serial(const Contingency& table) {
  if (table.num_rows() < 2) return 0.0;
  const std::uint64_t total = std::uint64_t{1} << (table.num_rows() - 1);
  return gray_walk(table, 0, total);
}

double event_sup_parallel(const Contingency& table) {
  if (table.num_rows() < 2) return 0.0;
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t total = std::uint64_t{1} << (table.num_rows() - 1);
  if (total <= kChunk) return gray_walk(table, 0, total);

  const auto chunks = static_cast<std::int64_t>(total / kChunk);
  double best = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : best)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto begin = static_cast<std::uint64_t>(c) * kChunk;
    best = std::max(best, gray_walk(table, begin, begin + kChunk));
  }
  return best;
}

}  // namespace depbound::detail
