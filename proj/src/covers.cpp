#include "depbound/covers.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "depbound/error.hpp"
#include "depbound/lp.hpp"

namespace depbound {

bool DependencyGraph::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<std::size_t> DependencyGraph::degrees() const {
  std::vector<std::size_t> deg(k, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

double SoftCover::size() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

std::vector<std::vector<double>> pairwise_alpha_matrix(const JointDistribution& dist, const AlphaOptions& options) {
  const std::size_t k = dist.num_vars();
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      m[i][j] = m[j][i] = alpha_dependence(dist, IndexSet{i}, IndexSet{j}, options);
    }
  }
  return m;
}

DependencyGraph thresholded_graph(const JointDistribution& dist, double gamma, const AlphaOptions& options) {
  require(gamma >= 0.0, ErrorKind::DomainViolation, "gamma must be non-negative");
  const auto m = pairwise_alpha_matrix(dist, options);
  DependencyGraph g;
  g.k = dist.num_vars();
  g.gamma = gamma;
  for (std::size_t i = 0; i < g.k; ++i)
    for (std::size_t j = i + 1; j < g.k; ++j)
      if (m[i][j] > gamma) g.edges.emplace_back(i, j);
  return g;
}

std::vector<IndexSet> greedy_coloring(const DependencyGraph& graph) {
  const auto deg = graph.degrees();
  std::vector<std::size_t> order(graph.k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });

  std::vector<std::vector<std::size_t>> adj(graph.k);
  for (const auto& [i, j] : graph.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(graph.k, kNone);
  std::size_t num_colors = 0;
  for (auto v : order) {
    std::vector<bool> used(num_colors + 1, false);
    for (auto u : adj[v])
      if (color[u] != kNone) used[color[u]] = true;
    std::size_t c = 0;
    while (used[c]) ++c;
    color[v] = c;
    num_colors = std::max(num_colors, c + 1);
  }
  std::vector<std::vector<std::size_t>> classes(num_colors);
  for (std::size_t v = 0; v < graph.k; ++v) classes[color[v]].push_back(v);
  std::vector<IndexSet> out;
  for (auto& c : classes) out.emplace_back(std::move(c));
  return out;
}

SoftCover verify_soft_cover(const JointDistribution& dist, SoftCover cover, const AlphaOptions& options) {
  const std::size_t k = dist.num_vars();
  std::vector<bool> seen(k, false);
  for (const auto& b : cover.blocks) {
    require(!b.empty(), ErrorKind::EmptyIndexSet, "cover contains an empty block");
    for (auto i : b) {
      require(i < k, ErrorKind::IndexOutOfRange, "block index " + std::to_string(i) + " out of range");
      seen[i] = true;
    }
  }
  require(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }), ErrorKind::BlocksDoNotCover,
          "blocks do not cover every variable");
  if (cover.weights.empty()) cover.weights.assign(cover.blocks.size(), 1.0);
  require(cover.weights.size() == cover.blocks.size(), ErrorKind::DomainViolation,
          "weights and blocks differ in length");

  std::vector<double> alphas;
  alphas.reserve(cover.blocks.size());
  bool ok = true;
  for (const auto& b : cover.blocks) {
    const double a = alpha_separation(dist, b, SeparationMode::ExactDp, options).value;
    alphas.push_back(a);
    ok = ok && a <= cover.gamma + kCertifyTolerance;
  }
  cover.certified_alphas = std::move(alphas);
  cover.certified = ok;
  return cover;
}

// ---------------------------------------------------------------------------
// exact search

namespace {

bool independent(const SeparationTable& table, std::uint64_t mask, double gamma) {
  return table.separation(mask) <= gamma + kCertifyTolerance;
}

std::vector<std::size_t> positions_of(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; mask != 0; ++p, mask >>= 1)
    if (mask & 1U) out.push_back(p);
  return out;
}

void check_exact_size(std::size_t k) {
  require(k <= kExactCoverMaxVars, ErrorKind::TooManyVariables,
          "exact cover search supports at most 12 variables, got " + std::to_string(k));
}

SoftCover finish_cover(const SeparationTable& table, const std::vector<std::uint64_t>& masks,
                       std::vector<double> weights, double gamma) {
  SoftCover cover;
  cover.gamma = gamma;
  std::vector<double> alphas;
  for (auto m : masks) {
    cover.blocks.push_back(table.subset(m));
    alphas.push_back(table.separation(m));
  }
  cover.weights = std::move(weights);
  cover.certified = std::all_of(alphas.begin(), alphas.end(), [&](double a) { return a <= gamma + kCertifyTolerance; });
  cover.certified_alphas = std::move(alphas);
  return cover;
}

// Depth-first search in lexicographic order over `cands` for exactly `depth`
// sets covering `all`. The first hit is the lexicographically smallest.
class CoverSearch {
 public:
  CoverSearch(const std::vector<std::uint64_t>& cands, std::uint64_t all) : cands_(cands), all_(all) {
    suffix_union_.assign(cands.size() + 1, 0);
    suffix_max_.assign(cands.size() + 1, 0);
    for (std::size_t i = cands.size(); i-- > 0;) {
      suffix_union_[i] = suffix_union_[i + 1] | cands[i];
      suffix_max_[i] = std::max<std::size_t>(suffix_max_[i + 1], std::popcount(cands[i]));
    }
  }

  /// Minimum number of sets, branching on the lowest uncovered element.
  std::size_t min_size() {
    best_ = static_cast<std::size_t>(std::popcount(all_)) + 1;
    branch_lowest(0, 0);
    return best_;
  }

  std::vector<std::uint64_t> lex_first(std::size_t depth) {
    chosen_.clear();
    std::vector<std::uint64_t> out;
    if (lex_dfs(0, 0, depth)) out = chosen_;
    return out;
  }

 private:
  const std::vector<std::uint64_t>& cands_;
  std::uint64_t all_;
  std::vector<std::uint64_t> suffix_union_;
  std::vector<std::size_t> suffix_max_;
  std::vector<std::uint64_t> chosen_;
  std::size_t best_ = 0;

  void branch_lowest(std::uint64_t covered, std::size_t used) {
    if (covered == all_) {
      best_ = std::min(best_, used);
      return;
    }
    if (used + 1 >= best_) return;
    const std::uint64_t uncovered = all_ & ~covered;
    // every remaining set covers at most suffix_max_[0] new elements
    const auto need = (static_cast<std::size_t>(std::popcount(uncovered)) + suffix_max_[0] - 1) / suffix_max_[0];
    if (used + need >= best_) return;
    const std::uint64_t low = uncovered & (~uncovered + 1);
    for (auto c : cands_) {
      if (c & low) branch_lowest(covered | c, used + 1);
    }
  }

  bool lex_dfs(std::size_t start, std::uint64_t covered, std::size_t remaining) {
    if (covered == all_) return true;
    if (remaining == 0) return false;
    const std::uint64_t uncovered = all_ & ~covered;
    for (std::size_t i = start; i < cands_.size(); ++i) {
      if ((uncovered & ~suffix_union_[i]) != 0) return false;
      if (static_cast<std::size_t>(std::popcount(uncovered)) > remaining * suffix_max_[i]) return false;
      if ((cands_[i] & uncovered) == 0) continue;
      chosen_.push_back(cands_[i]);
      if (lex_dfs(i + 1, covered | cands_[i], remaining - 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }
};

}  // namespace

std::vector<std::uint64_t> maximal_independent_sets(const SeparationTable& table, double gamma) {
  const std::size_t k = table.vars().size();
  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  std::vector<bool> indep(full + 1, false), above(full + 1, false);
  for (std::uint64_t m = 1; m <= full; ++m) indep[m] = independent(table, m, gamma);
  for (std::uint64_t m = full; m >= 1; --m) {
    bool any = false;
    for (std::size_t p = 0; p < k && !any; ++p) {
      const std::uint64_t bit = std::uint64_t{1} << p;
      if (m & bit) continue;
      any = indep[m | bit] || above[m | bit];
    }
    above[m] = any;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 1; m <= full; ++m)
    if (indep[m] && !above[m]) out.push_back(m);
  std::sort(out.begin(), out.end(),
            [](std::uint64_t a, std::uint64_t b) { return positions_of(a) < positions_of(b); });
  return out;
}

SoftCover min_soft_cover_exact(const SeparationTable& table, double gamma) {
  require(gamma >= 0.0, ErrorKind::DomainViolation, "gamma must be non-negative");
  const std::size_t k = table.vars().size();
  check_exact_size(k);
  const auto cands = maximal_independent_sets(table, gamma);
  const std::uint64_t all = (std::uint64_t{1} << k) - 1;
  CoverSearch search(cands, all);
  const std::size_t size = search.min_size();
  auto masks = search.lex_first(size);
  return finish_cover(table, masks, std::vector<double>(masks.size(), 1.0), gamma);
}

SoftCover min_soft_cover_exact(const JointDistribution& dist, double gamma, const AlphaOptions& options) {
  check_exact_size(dist.num_vars());
  const SeparationTable table(dist, IndexSet::range(dist.num_vars()), options);
  return min_soft_cover_exact(table, gamma);
}

SoftCover min_soft_cover_greedy(const JointDistribution& dist, double gamma, const AlphaOptions& options) {
  const auto graph = thresholded_graph(dist, gamma, options);
  auto sep = [&](const std::vector<std::size_t>& block) {
    return alpha_separation(dist, IndexSet(block), SeparationMode::ExactDp, options).value;
  };

  std::vector<std::vector<std::size_t>> pending;
  for (const auto& cls : greedy_coloring(graph)) {
    const auto& v = cls.values();
    for (std::size_t i = 0; i < v.size(); i += kExactCoverMaxVars) {
      pending.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(i),
                           v.begin() + static_cast<std::ptrdiff_t>(std::min(v.size(), i + kExactCoverMaxVars)));
    }
  }

  std::vector<std::vector<std::size_t>> blocks;
  for (auto& block : pending) {
    if (sep(block) <= gamma + kCertifyTolerance) {
      blocks.push_back(std::move(block));
      continue;
    }
    // first-fit split; singletons are always certified
    std::vector<std::vector<std::size_t>> parts;
    for (auto v : block) {
      bool placed = false;
      for (auto& part : parts) {
        auto trial = part;
        trial.push_back(v);
        if (sep(trial) <= gamma + kCertifyTolerance) {
          part = std::move(trial);
          placed = true;
          break;
        }
      }
      if (!placed) parts.push_back({v});
    }
    for (auto& p : parts) blocks.push_back(std::move(p));
  }
  std::sort(blocks.begin(), blocks.end());

  SoftCover cover;
  cover.gamma = gamma;
  for (auto& b : blocks) cover.blocks.emplace_back(std::move(b));
  cover.weights.assign(cover.blocks.size(), 1.0);
  return verify_soft_cover(dist, std::move(cover), options);
}

// ---------------------------------------------------------------------------
// fractional covers

FractionalCoverResult fractional_soft_cover(const SeparationTable& table, double gamma) {
  require(gamma >= 0.0, ErrorKind::DomainViolation, "gamma must be non-negative");
  const std::size_t k = table.vars().size();
  check_exact_size(k);
  const auto cands = maximal_independent_sets(table, gamma);
  const auto lp = solve_covering_lp(k, cands);

  constexpr double kWeightEps = 1e-12;
  std::map<std::uint64_t, double> weight;
  for (std::size_t j = 0; j < cands.size(); ++j)
    if (lp.weights[j] > kWeightEps) weight[cands[j]] += lp.weights[j];

  bool exact = true;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double excess = -1.0;
    for (const auto& [m, w] : weight)
      if (m & bit) excess += w;
    while (excess > kWeightEps) {
      auto it = std::find_if(weight.begin(), weight.end(), [&](const auto& kv) {
        const std::uint64_t rest = kv.first & ~bit;
        return (kv.first & bit) && kv.second > kWeightEps && (rest == 0 || independent(table, rest, gamma));
      });
      if (it == weight.end()) {
        exact = false;
        break;
      }
      const double delta = std::min(it->second, excess);
      const std::uint64_t rest = it->first & ~bit;
      it->second -= delta;
      if (rest != 0) weight[rest] += delta;
      excess -= delta;
    }
    std::erase_if(weight, [](const auto& kv) { return kv.second <= kWeightEps; });
  }

  std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>> ordered;
  for (const auto& [m, w] : weight) ordered.emplace_back(positions_of(m), m);
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::uint64_t> masks;
  std::vector<double> weights;
  for (const auto& [pos, m] : ordered) {
    masks.push_back(m);
    weights.push_back(std::min(1.0, weight[m]));
  }

  FractionalCoverResult res;
  res.cover = finish_cover(table, masks, std::move(weights), gamma);
  res.chi_star = lp.primal_objective;
  res.dual_objective = lp.dual_objective;
  res.exact = exact;
  return res;
}

FractionalCoverResult fractional_soft_cover(const JointDistribution& dist, double gamma,
                                            const AlphaOptions& options) {
  check_exact_size(dist.num_vars());
  const SeparationTable table(dist, IndexSet::range(dist.num_vars()), options);
  return fractional_soft_cover(table, gamma);
}

}  // namespace depbound
