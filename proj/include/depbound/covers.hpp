#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "depbound/alpha.hpp"
#include "depbound/dist.hpp"

namespace depbound {

/// Pairwise-thresholded dependency graph. An edge (i, j) means
/// alpha(X_i | X_j) > gamma. This is a heuristic: the absence of edges around
/// a set does not certify the set, so covers derived from it must be checked
/// with verify_soft_cover.
struct DependencyGraph {
  std::size_t k = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
  double gamma = 0.0;

  bool has_edge(std::size_t i, std::size_t j) const;
  std::vector<std::size_t> degrees() const;
};

struct SoftCover {
  std::vector<IndexSet> blocks;
  std::vector<double> weights;  // all 1 for non-fractional covers
  double gamma = 0.0;
  /// Exact alpha-separation of each block, once verified.
  std::optional<std::vector<double>> certified_alphas;
  bool certified = false;

  /// Number of blocks, or total weight for fractional covers.
  double size() const;
};

/// Sets within this of gamma still count as gamma-independent.
inline constexpr double kCertifyTolerance = 1e-12;
inline constexpr std::size_t kExactCoverMaxVars = 12;

/// Symmetric matrix of alpha({i} | {j}); zero diagonal.
std::vector<std::vector<double>> pairwise_alpha_matrix(const JointDistribution& dist,
                                                       const AlphaOptions& options = {});

DependencyGraph thresholded_graph(const JointDistribution& dist, double gamma, const AlphaOptions& options = {});

/// Largest-degree-first greedy coloring, ties by vertex index. Returns the
/// color classes in color order.
std::vector<IndexSet> greedy_coloring(const DependencyGraph& graph);

/// Computes the exact alpha-separation of every block and marks the cover
/// certified iff each is <= gamma.
SoftCover verify_soft_cover(const JointDistribution& dist, SoftCover cover, const AlphaOptions& options = {});

/// Gamma-independent subsets of [k] that have no gamma-independent strict
/// superset, as masks, ordered lexicographically by their index lists.
std::vector<std::uint64_t> maximal_independent_sets(const SeparationTable& table, double gamma);

/// Smallest soft cover (k <= 12), found by branch-and-bound over the
/// maximal gamma-independent sets. Among minimum covers the lexicographically
/// smallest block list is returned.
SoftCover min_soft_cover_exact(const JointDistribution& dist, double gamma, const AlphaOptions& options = {});
SoftCover min_soft_cover_exact(const SeparationTable& table, double gamma);

/// Greedy coloring of the thresholded graph, then verification; blocks that
/// fail are split greedily until every block is certified.
SoftCover min_soft_cover_greedy(const JointDistribution& dist, double gamma, const AlphaOptions& options = {});

struct FractionalCoverResult {
  /// Exact when `exact` is set: every element receives total weight 1.
  SoftCover cover;
  /// Optimal value of the covering LP.
  double chi_star = 0.0;
  /// Dual packing value; equals chi_star up to the LP gap.
  double dual_objective = 0.0;
  bool exact = false;
};

/// Covering LP over the maximal gamma-independent sets (k <= 12), followed by
/// the reduction to an exact fractional cover: excess weight on an element is
/// moved onto the same block without that element, provided the smaller block
/// is itself gamma-independent.
FractionalCoverResult fractional_soft_cover(const JointDistribution& dist, double gamma,
                                            const AlphaOptions& options = {});
FractionalCoverResult fractional_soft_cover(const SeparationTable& table, double gamma);

}  // namespace depbound
