#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "depbound/dist.hpp"
#include "depbound/rng.hpp"

namespace depbound {

// ---------------------------------------------------------------------------
// graphs

enum class GraphKind { Chain, General };

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted, no duplicates
  GraphKind kind = GraphKind::General;

  /// Validates and normalizes. A chain must have exactly the edges (i, i+1).
  static Graph make(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges,
                    GraphKind kind = GraphKind::General);
  static Graph chain(std::size_t n);
  /// Vertex 0 is the hub.
  static Graph star(std::size_t leaves);

  std::vector<std::vector<std::size_t>> adjacency() const;
  /// BFS distances from `source`; unreachable vertices get SIZE_MAX.
  std::vector<std::size_t> distances_from(std::size_t source) const;
  /// Smallest graph distance between two distinct members of `set`.
  std::size_t set_distance(const IndexSet& set) const;
};

// ---------------------------------------------------------------------------
// n-bit lower-bound model

/// P(w) = (1 + s(w) eps) / 2^n with eps = 4 n gamma, where s(w) = +1 iff
/// n/2 + t - sum(w) is even. Requires n even, n <= 20, 8t <= n and
/// 0 <= gamma <= 1/(4n).
JointDistribution lower_bound_distribution(std::size_t n, std::size_t t, double gamma);

/// P(sum >= n/2 + t) for the model above, in closed form.
double exact_tail_lower_model(std::size_t n, std::size_t t, double gamma);

// ---------------------------------------------------------------------------
// independent cascade

inline constexpr std::size_t kCascadeLiveEdgeMax = 22;  // n + directed edges
inline constexpr std::size_t kCascadeChainMax = 16;

/// Exact law of the final states. Each vertex fires initially with
/// probability q; each directed copy of an edge is live with probability p;
/// a vertex ends fired iff it is reachable from an initially fired vertex
/// along live edges. Chains use the left/right reach recursion, other graphs
/// enumerate live-edge configurations.
JointDistribution cascade_exact(const Graph& graph, double q, double p);

/// Live-edge enumeration regardless of graph kind; n + 2|E| <= 22.
JointDistribution cascade_exact_live_edge(const Graph& graph, double q, double p);

/// Forward recursion over the chain, n <= 16.
JointDistribution cascade_exact_chain(std::size_t n, double q, double p);

/// One run of the step process; bit i of the result is the final state of
/// vertex i. Every newly fired vertex gets one chance to fire each of its
/// unfired neighbors, and rounds repeat until nothing changes.
std::uint64_t cascade_draw(const Graph& graph, double q, double p, Rng& rng);

std::vector<Outcome> cascade_sample(const Graph& graph, double q, double p, std::uint64_t seed, std::size_t count);

/// |I|^2 ((4p)^d + 3 p^d), the chain bound on alpha_seq(I) with d = d(I).
double cascade_chain_lemma_bound(std::size_t set_size, std::size_t d, double p);

// ---------------------------------------------------------------------------
// Ising lattices

inline constexpr std::size_t kIsingExactMaxCells = 20;

/// Sites are numbered in raster order, site (x, y) -> y * width + x; spins take
/// the support values {-1, +1}. H sums sigma_i sigma_j once per unordered pair
/// of nearest neighbours. With a fixed boundary every missing neighbour of an
/// edge site is a frozen spin of value `boundary`.
struct LatticeSpec {
  std::size_t width = 1;
  std::size_t height = 1;
  double beta = 0.0;
  int coupling_sign = 1;
  std::optional<int> boundary;

  std::size_t cells() const { return width * height; }
};

/// P(sigma) = exp(-beta * coupling_sign * H(sigma)) / Z by full enumeration.
JointDistribution ising_exact(const LatticeSpec& spec);

/// Heat-bath sweeps in raster order from a uniformly random start; one
/// configuration is recorded after each sweep following `burn_in_sweeps`.
std::vector<Outcome> ising_gibbs_sample(const LatticeSpec& spec, std::uint64_t seed, std::size_t burn_in_sweeps,
                                        std::size_t count);

/// |E[prod_z s_z] - E[s_z1] E[prod_{z != z1} s_z]|, z1 the smallest index.
double moment_difference(const JointDistribution& dist, const IndexSet& z_set);

// ---------------------------------------------------------------------------
// stationary Markov chains

struct MarkovSpec {
  std::vector<double> states;               // support values
  std::vector<std::vector<double>> transition;  // row-stochastic
  std::size_t length = 1;
};

/// Validates the transition matrix and returns its unique stationary law.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

std::vector<std::vector<double>> transition_power(const std::vector<std::vector<double>>& transition,
                                                  std::size_t power);

/// Exact law of (X_1, ..., X_n) started from stationarity.
JointDistribution markov_process(const MarkovSpec& spec);

/// One stationary path, as state indices.
std::vector<std::uint32_t> markov_draw(const MarkovSpec& spec, const std::vector<double>& stationary, Rng& rng);

/// alpha({X_1..X_j} | {X_{j+k} .. X_{j+k+w-1}}) on the exact finite law.
/// Indices are 1-based; the future window must end at or before X_n. This is a
/// finite-window lower surrogate of the mixing coefficient, not a certificate.
double window_alpha(const JointDistribution& dist, std::size_t j, std::size_t k, std::size_t future_window);
double window_alpha(const MarkovSpec& spec, std::size_t j, std::size_t k, std::size_t future_window);

// ---------------------------------------------------------------------------
// block constructions

/// Block j (0-based) = {j, j + nu, ..., j + (mu-1) nu}.
std::vector<IndexSet> interleaved_blocks(std::size_t n, std::size_t mu, std::size_t nu);

/// Groups of lattice sites with pairwise l1 distance >= nu inside each group.
/// nu = 2 uses parity classes, nu = 3 the classes of (x + 2y) mod 5, other nu a
/// first-fit assignment in raster order. The result is always checked.
std::vector<IndexSet> distance_partition(std::size_t width, std::size_t height, std::size_t nu);

/// Smallest l1 distance between two sites of the same group; SIZE_MAX when no
/// group has two sites.
std::size_t min_in_group_distance(std::size_t width, const std::vector<IndexSet>& groups);

}  // namespace depbound
