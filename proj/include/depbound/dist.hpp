#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depbound/rng.hpp"

namespace depbound {

/// Joint tables larger than this are refused so that every quantity derived
/// from a table stays an exact enumeration.
inline constexpr std::size_t kMaxJointEntries = std::size_t{1} << 22;

/// Tolerance on total mass when a table is accepted without renormalization.
inline constexpr double kMassTolerance = 1e-9;

struct VariableSpec {
  std::string name;
  std::vector<double> support;  // strictly increasing, finite

  double range() const { return support.back() - support.front(); }
};

/// Sorted set of distinct variable positions.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> indices);
  explicit IndexSet(std::vector<std::size_t> indices);

  static IndexSet range(std::size_t k);
  static IndexSet from_mask(std::uint64_t mask);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<std::size_t>& values() const { return indices_; }

  bool contains(std::size_t index) const;
  /// Bitmask representation; every index must be < 64.
  std::uint64_t mask() const;
  /// Position of `index` within the set, or size() if absent.
  std::size_t position(std::size_t index) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet& a, const IndexSet& b) { return a.indices_ <=> b.indices_; }

 private:
  std::vector<std::size_t> indices_;
};

/// A permutation of an index set; perm[0] is the first element of the order.
struct Ordering {
  std::vector<std::size_t> perm;
};

/// One support position per variable.
using Outcome = std::vector<std::uint32_t>;

/// Finite joint law over k variables, stored sparsely by mixed-radix outcome
/// code (variable 0 most significant). Entries are kept sorted by code, so
/// iteration order is lexicographic in the outcome tuple. Zero-probability
/// outcomes are not stored.
class JointDistribution {
 public:
  struct Entry {
    std::uint64_t code;
    double p;
  };

  JointDistribution() = default;

  /// Builds from (code, p) pairs. Duplicate codes are summed when
  /// `merge_duplicates` is set and rejected otherwise. Mass must be 1 within
  /// kMassTolerance. Used by the generators and the transforms below.
  static JointDistribution from_codes(std::vector<VariableSpec> vars, std::vector<Entry> entries,
                                      bool merge_duplicates = true);

  std::size_t num_vars() const { return vars_.size(); }
  const std::vector<VariableSpec>& vars() const { return vars_; }
  const VariableSpec& var(std::size_t i) const { return vars_[i]; }
  std::span<const Entry> entries() const { return entries_; }

  std::uint32_t radix(std::size_t var) const { return static_cast<std::uint32_t>(vars_[var].support.size()); }
  std::uint64_t stride(std::size_t var) const { return strides_[var]; }
  /// Product of all support sizes.
  std::uint64_t joint_support_size() const { return joint_size_; }

  std::uint32_t index_of(std::uint64_t code, std::size_t var) const {
    return static_cast<std::uint32_t>((code / strides_[var]) % vars_[var].support.size());
  }
  double value_of(std::uint64_t code, std::size_t var) const { return vars_[var].support[index_of(code, var)]; }

  std::uint64_t encode(const Outcome& outcome) const;
  Outcome decode(std::uint64_t code) const;

  /// P(X = outcome); 0 for outcomes not stored.
  double probability(const Outcome& outcome) const;
  double total_mass() const;

 private:
  std::vector<VariableSpec> vars_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t joint_size_ = 1;
  std::vector<Entry> entries_;

  void init_layout();
};

struct BuildOptions {
  bool renormalize = false;
};

/// Validates and builds a distribution from explicit outcome tuples.
JointDistribution build_distribution(std::vector<VariableSpec> specs,
                                     const std::vector<std::pair<Outcome, double>>& entries,
                                     BuildOptions options = {});

/// Joint law of the selected variables, in index-set order.
JointDistribution marginal(const JointDistribution& dist, const IndexSet& vars);

/// Product of the one-dimensional marginals of the selected variables.
JointDistribution product_of_marginals(const JointDistribution& dist, const IndexSet& vars);

/// Replaces variable `var` by image[var-support-position]. Colliding images are
/// merged; the new support is the sorted set of distinct images.
JointDistribution pushforward(const JointDistribution& dist, std::size_t var, std::span<const double> image);
JointDistribution pushforward(const JointDistribution& dist, std::size_t var,
                              const std::function<double(double)>& map);

/// E[prod_{i in vars} X_i].
double product_moment(const JointDistribution& dist, const IndexSet& vars);

/// E[X_var].
double mean(const JointDistribution& dist, std::size_t var);

/// Inverse-CDF sampler over the entries in code order.
class DistributionSampler {
 public:
  explicit DistributionSampler(const JointDistribution& dist);

  /// Code of one draw.
  std::uint64_t draw_code(Rng& rng) const;
  const JointDistribution& distribution() const { return *dist_; }

 private:
  const JointDistribution* dist_;
  std::vector<double> cumulative_;
};

/// `count` i.i.d. draws; identical output for identical (seed, count).
std::vector<Outcome> sample(const JointDistribution& dist, std::uint64_t seed, std::size_t count);

}  // namespace depbound
