#include "depbound/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include <Eigen/Dense>

#include "depbound/alpha.hpp"
#include "depbound/bounds.hpp"
#include "depbound/error.hpp"

namespace depbound {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<VariableSpec> bit_vars(std::size_t n, const std::string& prefix) {
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back({prefix + std::to_string(i + 1), {0.0, 1.0}});
  return vars;
}

// Bit v of `mask` is vertex v; in the joint code variable 0 is most significant.
std::uint64_t mask_to_code(std::uint64_t mask, std::size_t n) {
  std::uint64_t code = 0;
  for (std::size_t v = 0; v < n; ++v) code |= ((mask >> v) & 1U) << (n - 1 - v);
  return code;
}

void check_probability(double x, const char* name) {
  require(x >= 0.0 && x <= 1.0, ErrorKind::DomainViolation, std::string(name) + " must lie in [0, 1]");
}

// q^k (1-q)^(n-k) for k = 0..n
std::vector<double> binomial_weights(double q, std::size_t n) {
  std::vector<double> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    w[k] = std::pow(q, static_cast<double>(k)) * std::pow(1.0 - q, static_cast<double>(n - k));
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

Graph Graph::make(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges, GraphKind kind) {
  for (auto& [i, j] : edges) {
    require(i != j, ErrorKind::DomainViolation, "self-loop in graph");
    require(i < n && j < n, ErrorKind::IndexOutOfRange, "edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), ErrorKind::DomainViolation,
          "duplicate edge in graph");
  if (kind == GraphKind::Chain) {
    bool ok = edges.size() + 1 == n || (n == 0 && edges.empty());
    for (std::size_t e = 0; ok && e < edges.size(); ++e) ok = edges[e] == std::make_pair(e, e + 1);
    require(ok, ErrorKind::DomainViolation, "chain graph must have exactly the edges (i, i+1)");
  }
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.kind = kind;
  return g;
}

Graph Graph::chain(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make(n, std::move(e), GraphKind::Chain);
}

Graph Graph::star(std::size_t leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return make(leaves + 1, std::move(e));
}

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

std::vector<std::size_t> Graph::distances_from(std::size_t source) const {
  require(source < n, ErrorKind::IndexOutOfRange, "source vertex out of range");
  const auto adj = adjacency();
  std::vector<std::size_t> dist(n, kUnreached);
  std::queue<std::size_t> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop();
    for (auto v : adj[u]) {
      if (dist[v] != kUnreached) continue;
      dist[v] = dist[u] + 1;
      queue.push(v);
    }
  }
  return dist;
}

std::size_t Graph::set_distance(const IndexSet& set) const {
  std::size_t best = kUnreached;
  for (std::size_t a = 0; a < set.size(); ++a) {
    const auto d = distances_from(set[a]);
    for (std::size_t b = a + 1; b < set.size(); ++b) best = std::min(best, d[set[b]]);
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {
void check_lower_model(std::size_t n, std::size_t t, double gamma) {
  require(n >= 2 && n % 2 == 0, ErrorKind::DomainViolation, "n must be even and positive");
  require(8 * t <= n, ErrorKind::DomainViolation, "t must lie in [0, n/8]");
  require(gamma >= 0.0 && gamma <= 1.0 / (4.0 * static_cast<double>(n)) + 1e-15, ErrorKind::DomainViolation,
          "gamma must lie in [0, 1/(4n)]");
}
}  // namespace

JointDistribution lower_bound_distribution(std::size_t n, std::size_t t, double gamma) {
  check_lower_model(n, t, gamma);
  require(n <= 20, ErrorKind::TooManyVariables, "lower-bound model supports n <= 20");
  const double eps = std::min(1.0, 4.0 * static_cast<double>(n) * gamma);
  const std::uint64_t size = std::uint64_t{1} << n;
  const double base = std::ldexp(1.0, -static_cast<int>(n));
  const long long target = static_cast<long long>(n / 2 + t);
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(size);
  for (std::uint64_t code = 0; code < size; ++code) {
    const long long ones = std::popcount(code);
    const double s = (target - ones) % 2 == 0 ? 1.0 : -1.0;
    entries.push_back({code, base * (1.0 + s * eps)});
  }
  return JointDistribution::from_codes(bit_vars(n, "X"), std::move(entries));
}

double exact_tail_lower_model(std::size_t n, std::size_t t, double gamma) {
  check_lower_model(n, t, gamma);
  const double eps = std::min(1.0, 4.0 * static_cast<double>(n) * gamma);
  const std::size_t k = n / 2 + t;
  return binomial_upper_tail(n, k) + eps * binomial(n - 1, k - 1) * std::ldexp(1.0, -static_cast<int>(n));
}

// ---------------------------------------------------------------------------

JointDistribution cascade_exact(const Graph& graph, double q, double p) {
  if (graph.kind == GraphKind::Chain) return cascade_exact_chain(graph.n, q, p);
  return cascade_exact_live_edge(graph, q, p);
}

JointDistribution cascade_exact_live_edge(const Graph& graph, double q, double p) {
  check_probability(q, "q");
  check_probability(p, "p");
  const std::size_t n = graph.n;
  const std::size_t m = 2 * graph.edges.size();
  require(n >= 1 && n + m <= kCascadeLiveEdgeMax, ErrorKind::GraphTooLarge,
          "live-edge enumeration needs n + directed edges <= 22, got " + std::to_string(n + m));

  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (const auto& [i, j] : graph.edges) {
    arcs.emplace_back(i, j);
    arcs.emplace_back(j, i);
  }
  const auto edge_w = binomial_weights(p, m);
  const auto fire_w = binomial_weights(q, n);
  const std::uint64_t vsize = std::uint64_t{1} << n;

  // per-configuration sums first, then compensated accumulation across the
  // up to 2^22 configurations
  std::vector<double> table(vsize, 0.0), carry(vsize, 0.0), local(vsize, 0.0);
  std::vector<std::uint64_t> reach(n), y(vsize);
  std::vector<std::vector<std::size_t>> out(n);
  for (std::uint64_t live = 0; live < (std::uint64_t{1} << m); ++live) {
    for (auto& o : out) o.clear();
    for (std::size_t a = 0; a < m; ++a)
      if ((live >> a) & 1U) out[arcs[a].first].push_back(arcs[a].second);
    for (std::size_t v = 0; v < n; ++v) {
      std::uint64_t seen = std::uint64_t{1} << v;
      std::vector<std::size_t> stack{v};
      while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto w : out[u]) {
          if ((seen >> w) & 1U) continue;
          seen |= std::uint64_t{1} << w;
          stack.push_back(w);
        }
      }
      reach[v] = seen;
    }
    const double pe = edge_w[static_cast<std::size_t>(std::popcount(live))];
    std::fill(local.begin(), local.end(), 0.0);
    y[0] = 0;
    local[0] = fire_w[0];
    for (std::uint64_t f = 1; f < vsize; ++f) {
      const std::uint64_t low = f & (~f + 1);
      y[f] = y[f ^ low] | reach[static_cast<std::size_t>(std::countr_zero(low))];
      local[y[f]] += fire_w[static_cast<std::size_t>(std::popcount(f))];
    }
    for (std::uint64_t mask = 0; mask < vsize; ++mask) {
      if (local[mask] == 0.0) continue;
      const double x = pe * local[mask];
      const double sum = table[mask] + x;
      carry[mask] += std::abs(table[mask]) >= std::abs(x) ? (table[mask] - sum) + x : (x - sum) + table[mask];
      table[mask] = sum;
    }
  }
  for (std::uint64_t mask = 0; mask < vsize; ++mask) table[mask] += carry[mask];

  std::vector<JointDistribution::Entry> entries;
  for (std::uint64_t mask = 0; mask < vsize; ++mask)
    if (table[mask] > 0.0) entries.push_back({mask_to_code(mask, n), table[mask]});
  return JointDistribution::from_codes(bit_vars(n, "Y"), std::move(entries));
}

JointDistribution cascade_exact_chain(std::size_t n, double q, double p) {
  check_probability(q, "q");
  check_probability(p, "p");
  require(n >= 1 && n <= kCascadeChainMax, ErrorKind::GraphTooLarge,
          "chain recursion supports 1 <= n <= 16, got " + std::to_string(n));
  // a_i: some initially fired j >= i reaches i leftwards; b_i: some j <= i
  // reaches i rightwards. a_i is guessed at step i and checked at step i+1.
  // State index: prefix of final states (variable 0 most significant) * 8 +
  // (b << 2 | a << 1 | x).
  const double qx[2] = {1.0 - q, q};
  const double pe[2] = {1.0 - p, p};
  std::vector<double> cur(2 * 8, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      if (x && !a) continue;  // a_0 >= x_0
      const int b = x;
      const std::uint64_t prefix = static_cast<std::uint64_t>(a | b);
      cur[prefix * 8 + static_cast<std::uint64_t>(b << 2 | a << 1 | x)] += qx[x];
    }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<double> next(cur.size() * 2, 0.0);
    for (std::size_t s = 0; s < cur.size(); ++s) {
      const double w = cur[s];
      if (w == 0.0) continue;
      const std::uint64_t prefix = s / 8;
      const int st = static_cast<int>(s % 8);
      const int pb = (st >> 2) & 1, pa = (st >> 1) & 1, px = st & 1;
      for (int x = 0; x < 2; ++x)
        for (int r = 0; r < 2; ++r)
          for (int l = 0; l < 2; ++l)
            for (int a = 0; a < 2; ++a) {
              if (pa != (px | (l & a))) continue;
              if (x && !a) continue;
              const int b = x | (r & pb);
              const std::uint64_t np = prefix * 2 + static_cast<std::uint64_t>(a | b);
              next[np * 8 + static_cast<std::uint64_t>(b << 2 | a << 1 | x)] += w * qx[x] * pe[r] * pe[l];
            }
    }
    cur = std::move(next);
  }
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (std::size_t s = 0; s < cur.size(); ++s) {
    const int st = static_cast<int>(s % 8);
    if (((st >> 1) & 1) != (st & 1)) continue;  // a_{n-1} = x_{n-1}
    table[s / 8] += cur[s];
  }
  std::vector<JointDistribution::Entry> entries;
  for (std::uint64_t code = 0; code < table.size(); ++code)
    if (table[code] > 0.0) entries.push_back({code, table[code]});
  return JointDistribution::from_codes(bit_vars(n, "Y"), std::move(entries));
}

std::uint64_t cascade_draw(const Graph& graph, double q, double p, Rng& rng) {
  const auto adj = graph.adjacency();
  std::uint64_t fired = 0;
  for (std::size_t v = 0; v < graph.n; ++v)
    if (rng.bernoulli(q)) fired |= std::uint64_t{1} << v;
  std::uint64_t frontier = fired;
  while (frontier != 0) {
    std::uint64_t fresh = 0;
    for (std::size_t u = 0; u < graph.n; ++u) {
      if (!((frontier >> u) & 1U)) continue;
      for (auto v : adj[u]) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if ((fired | fresh) & bit) continue;
        if (rng.bernoulli(p)) fresh |= bit;
      }
    }
    fired |= fresh;
    frontier = fresh;
  }
  return fired;
}

std::vector<Outcome> cascade_sample(const Graph& graph, double q, double p, std::uint64_t seed, std::size_t count) {
  check_probability(q, "q");
  check_probability(p, "p");
  require(graph.n <= 64, ErrorKind::GraphTooLarge, "cascade sampler supports at most 64 vertices");
  Rng rng(seed);
  std::vector<Outcome> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const auto m = cascade_draw(graph, q, p, rng);
    Outcome o(graph.n);
    for (std::size_t v = 0; v < graph.n; ++v) o[v] = static_cast<std::uint32_t>((m >> v) & 1U);
    out.push_back(std::move(o));
  }
  return out;
}

double cascade_chain_lemma_bound(std::size_t set_size, std::size_t d, double p) {
  const double k = static_cast<double>(set_size), dd = static_cast<double>(d);
  return k * k * (std::pow(4.0 * p, dd) + 3.0 * std::pow(p, dd));
}

// ---------------------------------------------------------------------------

namespace {

void check_lattice(const LatticeSpec& spec) {
  require(spec.width >= 1 && spec.height >= 1, ErrorKind::DomainViolation, "lattice dimensions must be positive");
  require(spec.beta >= 0.0, ErrorKind::DomainViolation, "beta must be non-negative");
  require(spec.coupling_sign == 1 || spec.coupling_sign == -1, ErrorKind::DomainViolation,
          "coupling sign must be +1 or -1");
  require(!spec.boundary || *spec.boundary == 1 || *spec.boundary == -1, ErrorKind::DomainViolation,
          "boundary spin must be +1 or -1");
}

// Sum of neighbouring spins of site (x, y), boundary included.
template <class Spin>
double local_field(const LatticeSpec& spec, std::size_t x, std::size_t y, Spin&& spin) {
  double h = 0.0;
  const double b = spec.boundary ? static_cast<double>(*spec.boundary) : 0.0;
  h += x > 0 ? spin(x - 1, y) : b;
  h += x + 1 < spec.width ? spin(x + 1, y) : b;
  h += y > 0 ? spin(x, y - 1) : b;
  h += y + 1 < spec.height ? spin(x, y + 1) : b;
  return h;
}

std::vector<VariableSpec> spin_vars(std::size_t cells) {
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < cells; ++i) vars.push_back({"S" + std::to_string(i), {-1.0, 1.0}});
  return vars;
}

}  // namespace

JointDistribution ising_exact(const LatticeSpec& spec) {
  check_lattice(spec);
  const std::size_t cells = spec.cells();
  require(cells <= kIsingExactMaxCells, ErrorKind::LatticeTooLarge,
          "exact Ising enumeration supports at most 20 sites, got " + std::to_string(cells));
  const std::uint64_t size = std::uint64_t{1} << cells;
  const double b = spec.boundary ? static_cast<double>(*spec.boundary) : 0.0;
  std::vector<double> logw(size);
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> s(cells);
  for (std::uint64_t code = 0; code < size; ++code) {
    for (std::size_t i = 0; i < cells; ++i) s[i] = ((code >> (cells - 1 - i)) & 1U) ? 1.0 : -1.0;
    double h = 0.0;
    for (std::size_t y = 0; y < spec.height; ++y)
      for (std::size_t x = 0; x < spec.width; ++x) {
        const double si = s[y * spec.width + x];
        if (x + 1 < spec.width) h += si * s[y * spec.width + x + 1];
        if (y + 1 < spec.height) h += si * s[(y + 1) * spec.width + x];
        if (spec.boundary) {
          const int missing = (x == 0) + (x + 1 == spec.width) + (y == 0) + (y + 1 == spec.height);
          h += si * b * missing;
        }
      }
    logw[code] = -spec.beta * spec.coupling_sign * h;
    top = std::max(top, logw[code]);
  }
  double z = 0.0;
  for (auto& w : logw) {
    w = std::exp(w - top);
    z += w;
  }
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(size);
  for (std::uint64_t code = 0; code < size; ++code) entries.push_back({code, logw[code] / z});
  return JointDistribution::from_codes(spin_vars(cells), std::move(entries));
}

std::vector<Outcome> ising_gibbs_sample(const LatticeSpec& spec, std::uint64_t seed, std::size_t burn_in_sweeps,
                                        std::size_t count) {
  check_lattice(spec);
  Rng rng(seed);
  const std::size_t w = spec.width;
  std::vector<int> s(spec.cells());
  for (auto& v : s) v = rng.bernoulli(0.5) ? 1 : -1;
  auto spin = [&](std::size_t x, std::size_t y) { return static_cast<double>(s[y * w + x]); };
  auto sweep = [&] {
    for (std::size_t y = 0; y < spec.height; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double h = local_field(spec, x, y, spin);
        const double p_up = 1.0 / (1.0 + std::exp(2.0 * spec.beta * spec.coupling_sign * h));
        s[y * w + x] = rng.bernoulli(p_up) ? 1 : -1;
      }
  };
  for (std::size_t i = 0; i < burn_in_sweeps; ++i) sweep();
  std::vector<Outcome> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    sweep();
    Outcome o(s.size());
    for (std::size_t c = 0; c < s.size(); ++c) o[c] = s[c] > 0 ? 1U : 0U;
    out.push_back(std::move(o));
  }
  return out;
}

double moment_difference(const JointDistribution& dist, const IndexSet& z_set) {
  require(z_set.size() >= 2, ErrorKind::IndexSetTooSmall, "moment difference needs at least two sites");
  const std::vector<std::size_t> rest(z_set.begin() + 1, z_set.end());
  return std::abs(product_moment(dist, z_set) - mean(dist, z_set[0]) * product_moment(dist, IndexSet(rest)));
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& t) {
  const auto s = static_cast<Eigen::Index>(t.size());
  require(s >= 1, ErrorKind::DomainViolation, "transition matrix is empty");
  Eigen::MatrixXd m(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    require(t[static_cast<std::size_t>(i)].size() == t.size(), ErrorKind::DomainViolation,
            "transition matrix must be square");
    double row = 0.0;
    for (Eigen::Index j = 0; j < s; ++j) {
      const double v = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      require(v >= 0.0, ErrorKind::DomainViolation, "negative transition probability");
      m(i, j) = v;
      row += v;
    }
    require(std::abs(row - 1.0) <= 1e-12, ErrorKind::DomainViolation, "transition rows must sum to 1");
  }
  return m;
}

void check_markov(const MarkovSpec& spec) {
  require(spec.states.size() == spec.transition.size(), ErrorKind::DomainViolation,
          "one support value per state is required");
  for (std::size_t i = 1; i < spec.states.size(); ++i)
    require(spec.states[i] > spec.states[i - 1], ErrorKind::InvalidVariable, "state values must be increasing");
  require(spec.length >= 1, ErrorKind::DomainViolation, "length must be positive");
}

}  // namespace

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const Eigen::MatrixXd m = to_matrix(transition);
  const Eigen::Index s = m.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m.transpose(), false);
  int unit = 0;
  for (Eigen::Index i = 0; i < s; ++i)
    if (std::abs(solver.eigenvalues()[i] - std::complex<double>(1.0, 0.0)) <= 1e-9) ++unit;
  require(unit == 1, ErrorKind::NoUniqueStationary, "eigenvalue 1 has multiplicity " + std::to_string(unit));

  // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1
  Eigen::MatrixXd a = m.transpose() - Eigen::MatrixXd::Identity(s, s);
  a.row(s - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s);
  rhs(s - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  std::vector<double> out(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < s; ++i) {
    require(pi(i) >= -1e-12, ErrorKind::NoUniqueStationary, "stationary solution has a negative entry");
    out[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
  }
  return out;
}

std::vector<std::vector<double>> transition_power(const std::vector<std::vector<double>>& transition,
                                                  std::size_t power) {
  const Eigen::MatrixXd m = to_matrix(transition);
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (std::size_t i = 0; i < power; ++i) r = r * m;
  std::vector<std::vector<double>> out(transition.size(), std::vector<double>(transition.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) row += out[i][j] = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    for (auto& v : out[i]) v /= row;  // keep rows stochastic to the last bit
  }
  return out;
}

JointDistribution markov_process(const MarkovSpec& spec) {
  check_markov(spec);
  const std::size_t s = spec.states.size();
  double cells = std::pow(static_cast<double>(s), static_cast<double>(spec.length));
  require(cells <= static_cast<double>(kMaxJointEntries), ErrorKind::TooLong,
          "joint table would have " + std::to_string(cells) + " entries");
  const auto pi = stationary_distribution(spec.transition);
  std::vector<double> cur(pi);
  for (std::size_t step = 1; step < spec.length; ++step) {
    std::vector<double> next(cur.size() * s);
    for (std::size_t code = 0; code < cur.size(); ++code) {
      const auto& row = spec.transition[code % s];
      for (std::size_t x = 0; x < s; ++x) next[code * s + x] = cur[code] * row[x];
    }
    cur = std::move(next);
  }
  std::vector<VariableSpec> vars;
  for (std::size_t i = 0; i < spec.length; ++i) vars.push_back({"X" + std::to_string(i + 1), spec.states});
  std::vector<JointDistribution::Entry> entries;
  for (std::uint64_t code = 0; code < cur.size(); ++code)
    if (cur[code] > 0.0) entries.push_back({code, cur[code]});
  return JointDistribution::from_codes(std::move(vars), std::move(entries));
}

std::vector<std::uint32_t> markov_draw(const MarkovSpec& spec, const std::vector<double>& stationary, Rng& rng) {
  auto pick = [&](const std::vector<double>& w) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return static_cast<std::uint32_t>(i);
    }
    return static_cast<std::uint32_t>(w.size() - 1);
  };
  std::vector<std::uint32_t> path(spec.length);
  path[0] = pick(stationary);
  for (std::size_t i = 1; i < spec.length; ++i) path[i] = pick(spec.transition[path[i - 1]]);
  return path;
}

double window_alpha(const JointDistribution& dist, std::size_t j, std::size_t k, std::size_t future_window) {
  require(j >= 1 && k >= 1 && future_window >= 1, ErrorKind::DomainViolation, "j, k and window must be positive");
  require(j + k + future_window - 1 <= dist.num_vars(), ErrorKind::WindowTooLarge,
          "future window runs past the end of the process");
  std::vector<std::size_t> past, future;
  for (std::size_t i = 0; i < j; ++i) past.push_back(i);
  for (std::size_t i = 0; i < future_window; ++i) future.push_back(j + k - 1 + i);
  return alpha_dependence(dist, IndexSet(past), IndexSet(future));
}

double window_alpha(const MarkovSpec& spec, std::size_t j, std::size_t k, std::size_t future_window) {
  require(j >= 1 && k >= 1 && future_window >= 1, ErrorKind::DomainViolation, "j, k and window must be positive");
  require(j + k + future_window - 1 <= spec.length, ErrorKind::WindowTooLarge,
          "future window runs past the end of the process");
  MarkovSpec shortened = spec;
  shortened.length = j + k + future_window - 1;
  return window_alpha(markov_process(shortened), j, k, future_window);
}

// ---------------------------------------------------------------------------

std::vector<IndexSet> interleaved_blocks(std::size_t n, std::size_t mu, std::size_t nu) {
  require(mu >= 1 && nu >= 1 && n == mu * nu, ErrorKind::BlockMismatch, "n must equal mu * nu");
  std::vector<IndexSet> blocks;
  for (std::size_t j = 0; j < nu; ++j) {
    std::vector<std::size_t> b;
    for (std::size_t m = 0; m < mu; ++m) b.push_back(j + m * nu);
    blocks.emplace_back(std::move(b));
  }
  return blocks;
}

std::size_t min_in_group_distance(std::size_t width, const std::vector<IndexSet>& groups) {
  std::size_t best = kUnreached;
  for (const auto& g : groups)
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b) {
        const auto xa = g[a] % width, ya = g[a] / width, xb = g[b] % width, yb = g[b] / width;
        const std::size_t d = (xa > xb ? xa - xb : xb - xa) + (ya > yb ? ya - yb : yb - ya);
        best = std::min(best, d);
      }
  return best;
}

std::vector<IndexSet> distance_partition(std::size_t width, std::size_t height, std::size_t nu) {
  require(width >= 1 && height >= 1, ErrorKind::DomainViolation, "lattice dimensions must be positive");
  require(nu >= 1, ErrorKind::DomainViolation, "nu must be at least 1");
  const std::size_t cells = width * height;
  std::vector<std::vector<std::size_t>> groups;
  if (nu == 1) {
    groups.emplace_back();
    for (std::size_t c = 0; c < cells; ++c) groups[0].push_back(c);
  } else if (nu == 2 || nu == 3) {
    const std::size_t mod = nu == 2 ? 2 : 5;
    const std::size_t ymul = nu == 2 ? 1 : 2;
    groups.resize(mod);
    for (std::size_t c = 0; c < cells; ++c) groups[(c % width + ymul * (c / width)) % mod].push_back(c);
  } else {
    for (std::size_t c = 0; c < cells; ++c) {
      bool placed = false;
      for (auto& g : groups) {
        const bool fits = std::all_of(g.begin(), g.end(), [&](std::size_t o) {
          const auto dx = c % width > o % width ? c % width - o % width : o % width - c % width;
          return dx + (c / width - o / width) >= nu;
        });
        if (fits) {
          g.push_back(c);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({c});
    }
  }
  std::vector<IndexSet> out;
  for (auto& g : groups)
    if (!g.empty()) out.emplace_back(std::move(g));
  const auto d = min_in_group_distance(width, out);
  require(d == kUnreached || d >= nu, ErrorKind::DomainViolation, "distance partition failed verification");
  return out;
}

}  // namespace depbound
