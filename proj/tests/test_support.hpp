#pragma once

// Small fixture builders and random-instance generators shared by the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "depbound/dist.hpp"
#include "depbound/rng.hpp"

namespace depbound::testing {

inline VariableSpec bit(const std::string& name) { return {name, {0.0, 1.0}}; }

inline JointDistribution independent_fair_bits(std::size_t k) {
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < k; ++i) vars.push_back(bit("X" + std::to_string(i + 1)));
  std::vector<JointDistribution::Entry> entries;
  const std::uint64_t n = std::uint64_t{1} << k;
  for (std::uint64_t c = 0; c < n; ++c) entries.push_back({c, 1.0 / static_cast<double>(n)});
  return JointDistribution::from_codes(vars, entries);
}

/// X = Y, both fair bits.
inline JointDistribution correlated_bits() {
  return build_distribution({bit("X"), bit("Y")}, {{{0, 0}, 0.5}, {{1, 1}, 0.5}});
}

/// Random law over `k` variables with supports of size 1..max_support. About
/// a quarter of the cells are zero so that supports are genuinely sparse.
inline JointDistribution random_distribution(Rng& rng, std::size_t k, std::uint32_t max_support,
                                             std::uint32_t min_support = 1) {
  std::vector<VariableSpec> vars;
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const auto size = min_support + static_cast<std::uint32_t>(rng.bits() % (max_support - min_support + 1));
    VariableSpec v{"V" + std::to_string(i), {}};
    double x = -1.0 + rng.uniform();
    for (std::uint32_t s = 0; s < size; ++s) {
      v.support.push_back(x);
      x += 0.25 + rng.uniform();
    }
    cells *= size;
    vars.push_back(std::move(v));
  }
  std::vector<JointDistribution::Entry> entries;
  double total = 0.0;
  for (std::uint64_t c = 0; c < cells; ++c) {
    const double w = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
    entries.push_back({c, w});
    total += w;
  }
  if (total == 0.0) {
    entries[0].p = 1.0;
    total = 1.0;
  }
  for (auto& e : entries) e.p /= total;
  return JointDistribution::from_codes(vars, entries);
}

}  // namespace depbound::testing

namespace depbound::testing {

/// Five independent fair edge bits on the 5-cycle; vertex i holds the pair
/// (bit of edge i-1, bit of edge i) as one variable with support {0,1,2,3}.
/// Adjacent vertices share a bit, the others are independent.
inline JointDistribution edge_shared_c5() {
  std::vector<VariableSpec> vars;
  for (int i = 0; i < 5; ++i) vars.push_back({"V" + std::to_string(i), {0.0, 1.0, 2.0, 3.0}});
  std::vector<std::pair<Outcome, double>> entries;
  for (std::uint32_t e = 0; e < 32; ++e) {
    Outcome o(5);
    for (std::uint32_t i = 0; i < 5; ++i) {
      const std::uint32_t prev = (e >> ((i + 4) % 5)) & 1U;
      const std::uint32_t own = (e >> i) & 1U;
      o[i] = 2 * prev + own;
    }
    entries.emplace_back(o, 1.0 / 32.0);
  }
  return build_distribution(vars, entries);
}

/// Relabels variables: variable i of the result is variable perm[i] of `d`.
inline JointDistribution permute_vars(const JointDistribution& d, const std::vector<std::size_t>& perm) {
  std::vector<VariableSpec> vars;
  for (auto p : perm) vars.push_back(d.var(p));
  std::vector<std::pair<Outcome, double>> entries;
  for (const auto& e : d.entries()) {
    const auto o = d.decode(e.code);
    Outcome r(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) r[i] = o[perm[i]];
    entries.emplace_back(r, e.p);
  }
  return build_distribution(vars, entries);
}

}  // namespace depbound::testing
