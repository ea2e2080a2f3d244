#include "depbound/alpha.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>

#include "alpha_kernels.hpp"
#include "depbound/error.hpp"

namespace depbound {

namespace {

// Orderings whose objective is within this of the optimum count as ties.
constexpr double kTieTolerance = 1e-13;

void check_group(const JointDistribution& dist, const IndexSet& group) {
  require(!group.empty(), ErrorKind::EmptyIndexSet, "variable group is empty");
  for (auto i : group) {
    require(i < dist.num_vars(), ErrorKind::IndexOutOfRange, "variable index " + std::to_string(i) + " out of range");
  }
}

void check_disjoint(const IndexSet& left, const IndexSet& right) {
  for (auto i : left) {
    require(!right.contains(i), ErrorKind::OverlappingIndexSets, "groups share variable " + std::to_string(i));
  }
}

double event_sup(const detail::Contingency& table, const AlphaOptions& options, Exec exec) {
  const std::size_t m = std::min(table.num_rows(), table.num_cols());
  require(m < 63 && (std::uint64_t{1} << m) <= options.event_cap, ErrorKind::SupportTooLarge,
          "smaller side has " + std::to_string(m) + " cells; 2^m exceeds the event cap");
  auto run = [exec](const detail::Contingency& t) {
    return exec == Exec::Parallel ? detail::event_sup_parallel(t) : detail::event_sup_serial(t);
  };
  return table.num_rows() <= table.num_cols() ? run(table) : run(detail::transpose(table));
}

std::vector<std::size_t> to_vars(const IndexSet& vars, std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < vars.size(); ++p) {
    if ((mask >> p) & 1U) out.push_back(vars[p]);
  }
  return out;
}

}  // namespace

double alpha_dependence(const JointDistribution& dist, const IndexSet& left, const IndexSet& right,
                        const AlphaOptions& options) {
  check_group(dist, left);
  check_group(dist, right);
  check_disjoint(left, right);
  return event_sup(detail::make_contingency(dist, left, right), options, options.exec);
}

double alpha_dependence_bruteforce(const JointDistribution& dist, const IndexSet& left, const IndexSet& right) {
  check_group(dist, left);
  check_group(dist, right);
  check_disjoint(left, right);

  std::uint64_t nl = 1, nr = 1;
  for (auto i : left) nl *= dist.radix(i);
  for (auto i : right) nr *= dist.radix(i);
  require(nl + nr <= 24, ErrorKind::SupportTooLarge, "brute force needs 2^|L| * 2^|R| <= 2^24");

  // Dense joint over the Cartesian supports.
  std::vector<double> joint(nl * nr, 0.0);
  for (const auto& e : dist.entries()) {
    std::uint64_t l = 0, r = 0;
    for (auto i : left) l = l * dist.radix(i) + dist.index_of(e.code, i);
    for (auto i : right) r = r * dist.radix(i) + dist.index_of(e.code, i);
    joint[l * nr + r] += e.p;
  }
  std::vector<double> pr(nr, 0.0);
  for (std::uint64_t l = 0; l < nl; ++l)
    for (std::uint64_t r = 0; r < nr; ++r) pr[r] += joint[l * nr + r];

  const std::uint64_t num_b = std::uint64_t{1} << nl;
  const std::uint64_t num_c = std::uint64_t{1} << nr;
  std::vector<double> b_col(nr);
  std::vector<double> joint_bc(num_c), mass_c(num_c);
  mass_c[0] = 0.0;
  for (std::uint64_t c = 1; c < num_c; ++c) {
    const auto low = static_cast<std::size_t>(std::countr_zero(c));
    mass_c[c] = mass_c[c & (c - 1)] + pr[low];
  }

  double best = 0.0;
  for (std::uint64_t b = 0; b < num_b; ++b) {
    std::fill(b_col.begin(), b_col.end(), 0.0);
    double mass_b = 0.0;
    for (std::uint64_t l = 0; l < nl; ++l) {
      if (!((b >> l) & 1U)) continue;
      for (std::uint64_t r = 0; r < nr; ++r) {
        b_col[r] += joint[l * nr + r];
        mass_b += joint[l * nr + r];
      }
    }
    joint_bc[0] = 0.0;
    for (std::uint64_t c = 1; c < num_c; ++c) {
      const auto low = static_cast<std::size_t>(std::countr_zero(c));
      joint_bc[c] = joint_bc[c & (c - 1)] + b_col[low];
      best = std::max(best, std::abs(joint_bc[c] - mass_b * mass_c[c]));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// SeparationTable

SeparationTable::SeparationTable(const JointDistribution& dist, const IndexSet& vars, const AlphaOptions& options)
    : vars_(vars) {
  check_group(dist, vars);
  const std::size_t k = vars.size();
  require(k <= kExactDpMaxVars, ErrorKind::TooManyVariables,
          "exact separation supports at most 20 variables, got " + std::to_string(k));

  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  sum_.assign(full + 1, 0.0);
  first_.assign(full + 1, 0);
  first_alpha_.assign(full + 1, 0.0);
  for (std::size_t p = 0; p < k; ++p) first_[std::uint64_t{1} << p] = static_cast<std::uint8_t>(p);

  std::vector<std::vector<std::uint64_t>> layers(k + 1);
  for (std::uint64_t m = 1; m <= full; ++m) layers[static_cast<std::size_t>(std::popcount(m))].push_back(m);

  std::exception_ptr failure;
  std::mutex failure_mutex;

  for (std::size_t size = 2; size <= k; ++size) {
    const auto& layer = layers[size];
    const auto count = static_cast<std::int64_t>(layer.size());

    auto solve = [&](std::uint64_t mask) {
      const IndexSet subset(to_vars(vars_, mask));
      const JointDistribution local = marginal(dist, subset);
      double cand[kExactDpMaxVars];
      double alphas[kExactDpMaxVars];
      std::size_t positions[kExactDpMaxVars];
      std::size_t n = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < k; ++p) {
        if (!((mask >> p) & 1U)) continue;
        const std::size_t local_pos = subset.position(vars_[p]);
        std::vector<std::size_t> rest;
        for (std::size_t q = 0; q < subset.size(); ++q)
          if (q != local_pos) rest.push_back(q);
        const auto table = detail::make_contingency(local, IndexSet{local_pos}, IndexSet(std::move(rest)));
        alphas[n] = event_sup(table, options, Exec::Serial);
        cand[n] = alphas[n] + sum_[mask & ~(std::uint64_t{1} << p)];
        positions[n] = p;
        best = std::min(best, cand[n]);
        ++n;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (cand[i] <= best + kTieTolerance) {
          sum_[mask] = best;
          first_[mask] = static_cast<std::uint8_t>(positions[i]);
          first_alpha_[mask] = alphas[i];
          break;
        }
      }
    };

    if (options.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t i = 0; i < count; ++i) {
        try {
          solve(layer[static_cast<std::size_t>(i)]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    } else {
      for (std::int64_t i = 0; i < count; ++i) solve(layer[static_cast<std::size_t>(i)]);
    }
    if (failure) std::rethrow_exception(failure);
  }
}

double SeparationTable::separation(std::uint64_t mask) const {
  require(mask != 0 && mask < sum_.size(), ErrorKind::IndexOutOfRange, "subset mask out of range");
  return sum_[mask] / static_cast<double>(std::popcount(mask));
}

IndexSet SeparationTable::subset(std::uint64_t mask) const { return IndexSet(to_vars(vars_, mask)); }

Ordering SeparationTable::ordering(std::uint64_t mask) const { return result(mask).ordering; }

AlphaSeparationResult SeparationTable::result(std::uint64_t mask) const {
  AlphaSeparationResult res;
  res.mode = SeparationMode::ExactDp;
  res.value = separation(mask);
  while (mask != 0) {
    const auto p = first_[mask];
    res.ordering.perm.push_back(vars_[p]);
    res.terms.push_back(std::popcount(mask) > 1 ? first_alpha_[mask] : 0.0);
    mask &= ~(std::uint64_t{1} << p);
  }
  return res;
}

// ---------------------------------------------------------------------------
// alpha_separation

namespace {

AlphaSeparationResult separation_brute_force(const JointDistribution& dist, const IndexSet& vars,
                                             const AlphaOptions& options) {
  const std::size_t k = vars.size();
  require(k <= kBruteForceMaxVars, ErrorKind::TooManyVariables,
          "brute-force separation supports at most 8 variables, got " + std::to_string(k));

  // memo[(x, suffix mask)] over positions
  std::vector<double> memo(k << k, std::numeric_limits<double>::quiet_NaN());
  auto term = [&](std::size_t x, std::uint64_t suffix) {
    double& slot = memo[(x << k) | suffix];
    if (std::isnan(slot)) slot = alpha_dependence(dist, IndexSet{vars[x]}, IndexSet(to_vars(vars, suffix)), options);
    return slot;
  };

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_perm = perm;
  std::vector<double> best_terms;
  do {
    std::uint64_t suffix = (std::uint64_t{1} << k) - 1;
    double total = 0.0;
    std::vector<double> terms;
    for (std::size_t i = 0; i < k; ++i) {
      suffix &= ~(std::uint64_t{1} << perm[i]);
      const double t = i + 1 < k ? term(perm[i], suffix) : 0.0;
      terms.push_back(t);
      total += t;
    }
    if (total < best - kTieTolerance) {
      best = total;
      best_perm = perm;
      best_terms = std::move(terms);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  AlphaSeparationResult res;
  res.mode = SeparationMode::BruteForce;
  res.value = best / static_cast<double>(k);
  for (auto p : best_perm) res.ordering.perm.push_back(vars[p]);
  res.terms = std::move(best_terms);
  return res;
}

AlphaSeparationResult separation_greedy(const JointDistribution& dist, const IndexSet& vars,
                                        const AlphaOptions& options) {
  std::vector<std::size_t> remaining(vars.begin(), vars.end());
  AlphaSeparationResult res;
  res.mode = SeparationMode::Greedy;
  double total = 0.0;
  while (remaining.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < remaining.size(); ++j)
        if (j != i) rest.push_back(remaining[j]);
      const double a = alpha_dependence(dist, IndexSet{remaining[i]}, IndexSet(std::move(rest)), options);
      if (a < best - kTieTolerance) {
        best = a;
        best_i = i;
      }
    }
    res.ordering.perm.push_back(remaining[best_i]);
    res.terms.push_back(best);
    total += best;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_i));
  }
  res.ordering.perm.push_back(remaining.front());
  res.terms.push_back(0.0);
  res.value = total / static_cast<double>(vars.size());
  return res;
}

}  // namespace

AlphaSeparationResult alpha_separation(const JointDistribution& dist, const IndexSet& vars, SeparationMode mode,
                                       const AlphaOptions& options) {
  check_group(dist, vars);
  if (vars.size() == 1) {
    AlphaSeparationResult res;
    res.mode = mode;
    res.ordering.perm = {vars[0]};
    res.terms = {0.0};
    return res;
  }
  switch (mode) {
    case SeparationMode::ExactDp: {
      const SeparationTable table(dist, vars, options);
      return table.result((std::uint64_t{1} << vars.size()) - 1);
    }
    case SeparationMode::BruteForce:
      return separation_brute_force(dist, vars, options);
    case SeparationMode::Greedy:
      return separation_greedy(dist, vars, options);
  }
  throw Error(ErrorKind::DomainViolation, "unknown separation mode");
}

double approximation_deviation_bound(std::size_t k, double alpha_sep, double range, double lambda) {
  require(lambda > 0.0, ErrorKind::NonpositiveLambda, "lambda must be positive");
  require(k >= 1 && range >= 0.0 && alpha_sep >= 0.0, ErrorKind::DomainViolation,
          "need k >= 1, range >= 0, alpha_sep >= 0");
  return 18.0 * static_cast<double>(k) * alpha_sep * std::sqrt(range / lambda);
}

}  // namespace depbound
