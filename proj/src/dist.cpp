#include "depbound/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "depbound/error.hpp"

namespace depbound {

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::initializer_list<std::size_t> indices) : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(), ErrorKind::DomainViolation,
          "index set contains duplicates");
}

IndexSet IndexSet::range(std::size_t k) {
  std::vector<std::size_t> v(k);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return IndexSet(std::move(v));
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) v.push_back(i);
  }
  return IndexSet(std::move(v));
}

bool IndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::uint64_t IndexSet::mask() const {
  std::uint64_t m = 0;
  for (auto i : indices_) {
    require(i < 64, ErrorKind::IndexOutOfRange, "index does not fit a 64-bit mask");
    m |= std::uint64_t{1} << i;
  }
  return m;
}

std::size_t IndexSet::position(std::size_t index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return indices_.size();
  return static_cast<std::size_t>(it - indices_.begin());
}

// ---------------------------------------------------------------------------
// JointDistribution

namespace {

void validate_spec(const VariableSpec& spec) {
  require(!spec.support.empty(), ErrorKind::InvalidVariable, "variable '" + spec.name + "' has empty support");
  for (std::size_t i = 0; i < spec.support.size(); ++i) {
    require(std::isfinite(spec.support[i]), ErrorKind::InvalidVariable,
            "variable '" + spec.name + "' has a non-finite support value");
    if (i > 0) {
      require(spec.support[i - 1] < spec.support[i], ErrorKind::InvalidVariable,
              "support of '" + spec.name + "' is not strictly increasing");
    }
  }
}

void check_index_set(const JointDistribution& dist, const IndexSet& vars) {
  require(!vars.empty(), ErrorKind::EmptyIndexSet, "index set is empty");
  for (auto i : vars) {
    require(i < dist.num_vars(), ErrorKind::IndexOutOfRange,
            "variable index " + std::to_string(i) + " out of range for k=" + std::to_string(dist.num_vars()));
  }
}

}  // namespace

void JointDistribution::init_layout() {
  for (const auto& v : vars_) validate_spec(v);
  strides_.assign(vars_.size(), 1);
  joint_size_ = 1;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    strides_[i] = joint_size_;
    const auto r = static_cast<std::uint64_t>(vars_[i].support.size());
    require(joint_size_ <= (std::numeric_limits<std::uint64_t>::max() >> 1) / r, ErrorKind::SupportTooLarge,
            "product of support sizes overflows the outcome encoding");
    joint_size_ *= r;
  }
}

JointDistribution JointDistribution::from_codes(std::vector<VariableSpec> vars, std::vector<Entry> entries,
                                                bool merge_duplicates) {
  JointDistribution d;
  d.vars_ = std::move(vars);
  d.init_layout();

  for (const auto& e : entries) {
    require(e.code < d.joint_size_, ErrorKind::InvalidOutcome, "outcome code out of range");
    require(std::isfinite(e.p), ErrorKind::NegativeProbability, "probability is not finite");
    require(e.p >= 0.0, ErrorKind::NegativeProbability, "probability " + std::to_string(e.p) + " is negative");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.code < b.code; });

  d.entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!d.entries_.empty() && d.entries_.back().code == e.code) {
      require(merge_duplicates, ErrorKind::DuplicateOutcome, "duplicate outcome tuple");
      d.entries_.back().p += e.p;
    } else {
      d.entries_.push_back(e);
    }
  }
  std::erase_if(d.entries_, [](const Entry& e) { return e.p == 0.0; });
  require(d.entries_.size() <= kMaxJointEntries, ErrorKind::SupportTooLarge,
          "joint table has " + std::to_string(d.entries_.size()) + " entries (cap 2^22)");

  const double mass = d.total_mass();
  require(std::abs(mass - 1.0) <= kMassTolerance, ErrorKind::MassNotOne,
          "total probability mass is " + std::to_string(mass));
  return d;
}

std::uint64_t JointDistribution::encode(const Outcome& outcome) const {
  require(outcome.size() == vars_.size(), ErrorKind::InvalidOutcome, "outcome arity does not match variable count");
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    require(outcome[i] < vars_[i].support.size(), ErrorKind::InvalidOutcome,
            "support index " + std::to_string(outcome[i]) + " out of range for '" + vars_[i].name + "'");
    code += outcome[i] * strides_[i];
  }
  return code;
}

Outcome JointDistribution::decode(std::uint64_t code) const {
  Outcome o(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) o[i] = index_of(code, i);
  return o;
}

double JointDistribution::probability(const Outcome& outcome) const {
  const auto code = encode(outcome);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), code,
                             [](const Entry& e, std::uint64_t c) { return e.code < c; });
  return (it != entries_.end() && it->code == code) ? it->p : 0.0;
}

double JointDistribution::total_mass() const {
  double m = 0.0;
  for (const auto& e : entries_) m += e.p;
  return m;
}

// ---------------------------------------------------------------------------
// Operations

JointDistribution build_distribution(std::vector<VariableSpec> specs,
                                     const std::vector<std::pair<Outcome, double>>& entries, BuildOptions options) {
  for (const auto& s : specs) validate_spec(s);
  require(!specs.empty(), ErrorKind::InvalidVariable, "distribution needs at least one variable");

  // Layout only; validation of mass happens after optional renormalization.
  JointDistribution layout = JointDistribution::from_codes(
      specs, {JointDistribution::Entry{0, 1.0}});

  std::vector<JointDistribution::Entry> coded;
  coded.reserve(entries.size());
  double mass = 0.0;
  for (const auto& [outcome, p] : entries) {
    require(std::isfinite(p) && p >= 0.0, ErrorKind::NegativeProbability,
            "probability " + std::to_string(p) + " is negative or not finite");
    coded.push_back({layout.encode(outcome), p});
    mass += p;
  }
  {
    std::vector<std::uint64_t> codes(coded.size());
    std::transform(coded.begin(), coded.end(), codes.begin(), [](const auto& e) { return e.code; });
    std::sort(codes.begin(), codes.end());
    require(std::adjacent_find(codes.begin(), codes.end()) == codes.end(), ErrorKind::DuplicateOutcome,
            "duplicate outcome tuple");
  }
  if (options.renormalize) {
    require(mass > 0.0, ErrorKind::MassNotOne, "cannot renormalize a table with zero mass");
    for (auto& e : coded) e.p /= mass;
  }
  return JointDistribution::from_codes(std::move(specs), std::move(coded), /*merge_duplicates=*/false);
}

JointDistribution marginal(const JointDistribution& dist, const IndexSet& vars) {
  check_index_set(dist, vars);
  std::vector<VariableSpec> specs;
  specs.reserve(vars.size());
  for (auto i : vars) specs.push_back(dist.var(i));

  std::vector<std::uint64_t> out_strides(vars.size(), 1);
  for (std::size_t j = vars.size(); j-- > 1;) {
    out_strides[j - 1] = out_strides[j] * dist.radix(vars[j]);
  }

  std::vector<JointDistribution::Entry> out;
  out.reserve(dist.entries().size());
  for (const auto& e : dist.entries()) {
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < vars.size(); ++j) code += dist.index_of(e.code, vars[j]) * out_strides[j];
    out.push_back({code, e.p});
  }
  return JointDistribution::from_codes(std::move(specs), std::move(out));
}

JointDistribution product_of_marginals(const JointDistribution& dist, const IndexSet& vars) {
  check_index_set(dist, vars);
  std::vector<std::vector<double>> margins;
  std::uint64_t size = 1;
  for (auto i : vars) {
    std::vector<double> m(dist.radix(i), 0.0);
    for (const auto& e : dist.entries()) m[dist.index_of(e.code, i)] += e.p;
    size *= m.size();
    require(size <= kMaxJointEntries, ErrorKind::SupportTooLarge, "product law exceeds 2^22 outcomes");
    margins.push_back(std::move(m));
  }

  std::vector<VariableSpec> specs;
  for (auto i : vars) specs.push_back(dist.var(i));

  std::vector<JointDistribution::Entry> out;
  out.reserve(size);
  for (std::uint64_t code = 0; code < size; ++code) {
    double p = 1.0;
    std::uint64_t rest = code;
    for (std::size_t j = margins.size(); j-- > 0;) {
      p *= margins[j][rest % margins[j].size()];
      rest /= margins[j].size();
    }
    if (p > 0.0) out.push_back({code, p});
  }
  return JointDistribution::from_codes(std::move(specs), std::move(out));
}

JointDistribution pushforward(const JointDistribution& dist, std::size_t var, std::span<const double> image) {
  require(var < dist.num_vars(), ErrorKind::IndexOutOfRange, "pushforward variable out of range");
  require(image.size() == dist.radix(var), ErrorKind::DomainViolation, "map must be total on the support");

  std::vector<double> values(image.begin(), image.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::uint32_t> remap(image.size());
  for (std::size_t s = 0; s < image.size(); ++s) {
    remap[s] = static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), image[s]) - values.begin());
  }

  auto specs = dist.vars();
  specs[var].support = values;

  std::vector<std::uint64_t> strides(specs.size(), 1);
  for (std::size_t j = specs.size(); j-- > 1;) strides[j - 1] = strides[j] * specs[j].support.size();

  std::vector<JointDistribution::Entry> out;
  out.reserve(dist.entries().size());
  for (const auto& e : dist.entries()) {
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      const auto idx = dist.index_of(e.code, j);
      code += (j == var ? remap[idx] : idx) * strides[j];
    }
    out.push_back({code, e.p});
  }
  return JointDistribution::from_codes(std::move(specs), std::move(out));
}

JointDistribution pushforward(const JointDistribution& dist, std::size_t var,
                              const std::function<double(double)>& map) {
  require(var < dist.num_vars(), ErrorKind::IndexOutOfRange, "pushforward variable out of range");
  const auto& support = dist.var(var).support;
  std::vector<double> image(support.size());
  std::transform(support.begin(), support.end(), image.begin(), map);
  return pushforward(dist, var, image);
}

double product_moment(const JointDistribution& dist, const IndexSet& vars) {
  check_index_set(dist, vars);
  double total = 0.0;
  for (const auto& e : dist.entries()) {
    double prod = e.p;
    for (auto i : vars) prod *= dist.value_of(e.code, i);
    total += prod;
  }
  return total;
}

double mean(const JointDistribution& dist, std::size_t var) { return product_moment(dist, IndexSet{var}); }

DistributionSampler::DistributionSampler(const JointDistribution& dist) : dist_(&dist) {
  cumulative_.reserve(dist.entries().size());
  double acc = 0.0;
  for (const auto& e : dist.entries()) {
    acc += e.p;
    cumulative_.push_back(acc);
  }
}

std::uint64_t DistributionSampler::draw_code(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return dist_->entries()[static_cast<std::size_t>(it - cumulative_.begin())].code;
}

std::vector<Outcome> sample(const JointDistribution& dist, std::uint64_t seed, std::size_t count) {
  std::vector<Outcome> out;
  if (count == 0) return out;
  DistributionSampler sampler(dist);
  Rng rng(seed);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dist.decode(sampler.draw_code(rng)));
  return out;
}

}  // namespace depbound
