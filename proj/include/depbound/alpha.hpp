#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "depbound/dist.hpp"
#include "depbound/execution.hpp"

namespace depbound {

struct AlphaOptions {
  /// Largest admissible 2^m, where m is the number of support cells of the
  /// smaller side of an alpha-dependence query.
  std::uint64_t event_cap = std::uint64_t{1} << 16;
  Exec exec = Exec::Parallel;
};

inline constexpr std::size_t kExactDpMaxVars = 20;
inline constexpr std::size_t kBruteForceMaxVars = 8;

/// sup over events B of the left group and C of the right group of
/// |P(B and C) - P(B) P(C)|, computed exactly.
///
/// Only events of the side with fewer support cells are enumerated. For a fixed
/// B the deviation is additive over the cells c of the other side, so the best
/// C collects every cell of one sign; because the deviations sum to zero both
/// signs give the same value, namely half their absolute sum.
double alpha_dependence(const JointDistribution& dist, const IndexSet& left, const IndexSet& right,
                        const AlphaOptions& options = {});

/// Testing oracle: explicit double enumeration of event pairs over the full
/// Cartesian supports of both groups.
double alpha_dependence_bruteforce(const JointDistribution& dist, const IndexSet& left, const IndexSet& right);

enum class SeparationMode { ExactDp, BruteForce, Greedy };

struct AlphaSeparationResult {
  double value = 0.0;
  Ordering ordering;
  SeparationMode mode = SeparationMode::ExactDp;
  /// terms[i] = alpha(X_{perm[i]} | X_{perm[i+1]}, ...); the last entry is 0.
  std::vector<double> terms;
};

/// Alpha-separation: the minimum over orderings of the set of the averaged
/// element-versus-suffix alpha-dependences. Ties resolve to the
/// lexicographically smallest permutation.
AlphaSeparationResult alpha_separation(const JointDistribution& dist, const IndexSet& vars, SeparationMode mode,
                                       const AlphaOptions& options = {});

/// Alpha-separation of every non-empty subset of `vars`, from one pass of the
/// suffix-set recursion f(S) = min_x alpha(x | S - x) + f(S - x).
class SeparationTable {
 public:
  SeparationTable(const JointDistribution& dist, const IndexSet& vars, const AlphaOptions& options = {});

  const IndexSet& vars() const { return vars_; }
  /// `mask` selects positions within vars().
  double separation(std::uint64_t mask) const;
  /// The subset of vars() selected by `mask`.
  IndexSet subset(std::uint64_t mask) const;
  /// Lexicographically smallest optimal ordering, in variable indices.
  Ordering ordering(std::uint64_t mask) const;
  AlphaSeparationResult result(std::uint64_t mask) const;

 private:
  IndexSet vars_;
  std::vector<double> sum_;          // f(S), un-normalized
  std::vector<std::uint8_t> first_;  // position of the chosen first element
  std::vector<double> first_alpha_;  // alpha(first | S - first)
};

/// Deviation bound 18 k alpha_sep sqrt(range / lambda) for the independent
/// copies of a set of k variables.
double approximation_deviation_bound(std::size_t k, double alpha_sep, double range, double lambda);

}  // namespace depbound
