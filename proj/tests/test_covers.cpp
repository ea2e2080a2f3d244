#include <algorithm>
#include <cmath>
#include <numeric>

#include "depbound/covers.hpp"
#include "depbound/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace depbound;
namespace dt = depbound::testing;

namespace {

// P(w) = (1 + s(w)) / 16 on {0,1}^4, s = +1 iff (2 - sum w) is even.
JointDistribution parity_four() {
  std::vector<VariableSpec> vars;
  for (int i = 0; i < 4; ++i) vars.push_back(dt::bit("X" + std::to_string(i)));
  std::vector<std::pair<Outcome, double>> entries;
  for (std::uint32_t w = 0; w < 16; ++w) {
    const int ones = std::popcount(w);
    if ((2 - ones) % 2 != 0) continue;
    Outcome o(4);
    for (std::uint32_t i = 0; i < 4; ++i) o[i] = (w >> (3 - i)) & 1U;
    entries.emplace_back(o, 1.0 / 8.0);
  }
  return build_distribution(vars, entries);
}

std::vector<std::vector<std::size_t>> as_lists(const SoftCover& c) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& b : c.blocks) out.push_back(b.values());
  return out;
}

void check_covers_all(const SoftCover& c, std::size_t k) {
  std::vector<bool> seen(k, false);
  for (const auto& b : c.blocks)
    for (auto i : b) seen[i] = true;
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }));
}

}  // namespace

TEST_CASE("pairwise matrix and thresholded graph") {
  SUBCASE("independent triple") {
    const auto m = pairwise_alpha_matrix(dt::independent_fair_bits(3));
    for (const auto& row : m)
      for (double v : row) CHECK(v == doctest::Approx(0.0));
    CHECK(thresholded_graph(dt::independent_fair_bits(3), 0.0).edges.empty());
  }
  SUBCASE("one correlated pair plus an independent bit") {
    const auto d = build_distribution({dt::bit("A"), dt::bit("B"), dt::bit("C")},
                                      {{{0, 0, 0}, 0.25}, {{0, 0, 1}, 0.25}, {{1, 1, 0}, 0.25}, {{1, 1, 1}, 0.25}});
    const auto m = pairwise_alpha_matrix(d);
    CHECK(m[0][1] == doctest::Approx(0.25));
    CHECK(m[0][2] == doctest::Approx(0.0));
    CHECK(m[1][2] == doctest::Approx(0.0));
    const auto g = thresholded_graph(d, 0.0);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.has_edge(1, 0));
    CHECK(thresholded_graph(d, 0.25).edges.empty());
  }
  SUBCASE("symmetry on random laws") {
    Rng rng(5);
    const auto d = dt::random_distribution(rng, 4, 3);
    const auto m = pairwise_alpha_matrix(d);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(m[i][i] == 0.0);
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(m[i][j] - m[j][i]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(thresholded_graph(dt::correlated_bits(), -0.1), Error);
}

TEST_CASE("greedy coloring") {
  SUBCASE("path 0-1-2-3-4 with gap-1 and gap-2 edges") {
    DependencyGraph g;
    g.k = 5;
    g.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
    auto classes = greedy_coloring(g);
    REQUIRE(classes.size() == 3);
    CHECK(classes[0] == IndexSet{2});  // highest degree first
    std::sort(classes.begin(), classes.end());
    CHECK(classes[0] == IndexSet{0, 3});
    CHECK(classes[1] == IndexSet{1, 4});
    CHECK(classes[2] == IndexSet{2});
  }
  SUBCASE("empty and complete graphs") {
    DependencyGraph e;
    e.k = 4;
    CHECK(greedy_coloring(e).size() == 1);
    DependencyGraph c;
    c.k = 4;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) c.edges.emplace_back(i, j);
    CHECK(greedy_coloring(c).size() == 4);
  }
}

TEST_CASE("verify_soft_cover") {
  const auto d = dt::correlated_bits();
  SUBCASE("singletons are certified") {
    SoftCover c;
    c.blocks = {IndexSet{0}, IndexSet{1}};
    const auto v = verify_soft_cover(d, c);
    CHECK(v.certified);
    REQUIRE(v.certified_alphas.has_value());
    CHECK((*v.certified_alphas)[0] == 0.0);
    CHECK(v.weights == std::vector<double>{1.0, 1.0});
  }
  SUBCASE("dependent block at gamma 0 is not") {
    SoftCover c;
    c.blocks = {IndexSet{0, 1}};
    const auto v = verify_soft_cover(d, c);
    CHECK_FALSE(v.certified);
    CHECK((*v.certified_alphas)[0] == doctest::Approx(0.125));
  }
  SUBCASE("missing element") {
    SoftCover c;
    c.blocks = {IndexSet{0}};
    try {
      verify_soft_cover(d, c);
      FAIL("expected BlocksDoNotCover");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BlocksDoNotCover);
    }
  }
  SUBCASE("index out of range") {
    SoftCover c;
    c.blocks = {IndexSet{0, 1}, IndexSet{2}};
    CHECK_THROWS_AS(verify_soft_cover(d, c), Error);
  }
}

TEST_CASE("exact soft covers") {
  SUBCASE("whole set when gamma is large") {
    Rng rng(17);
    const auto d = dt::random_distribution(rng, 4, 2, 2);
    const double full = alpha_separation(d, IndexSet::range(4), SeparationMode::ExactDp).value;
    const auto c = min_soft_cover_exact(d, full);
    CHECK(c.blocks.size() == 1);
    CHECK(c.certified);
  }
  SUBCASE("independent set at gamma 0") {
    const auto c = min_soft_cover_exact(dt::independent_fair_bits(5), 0.0);
    CHECK(c.blocks.size() == 1);
    CHECK(c.blocks[0] == IndexSet::range(5));
  }
  SUBCASE("parity law: every 3-subset is independent, the full set is not") {
    const auto d = parity_four();
    const auto c = min_soft_cover_exact(d, 0.0);
    CHECK(c.size() == 2.0);
    CHECK(c.certified);
    CHECK(as_lists(c) == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {0, 1, 3}});
    const SeparationTable table(d, IndexSet::range(4));
    CHECK(maximal_independent_sets(table, 0.0) == std::vector<std::uint64_t>{0b0111, 0b1011, 0b1101, 0b1110});
  }
  SUBCASE("edge-shared 5-cycle") {
    const auto c = min_soft_cover_exact(dt::edge_shared_c5(), 0.0);
    CHECK(c.size() == 3.0);
    CHECK(c.certified);
    check_covers_all(c, 5);
  }
  SUBCASE("size cap") {
    try {
      min_soft_cover_exact(dt::independent_fair_bits(13), 0.0);
      FAIL("expected TooManyVariables");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TooManyVariables);
    }
  }
}

TEST_CASE("greedy soft covers") {
  SUBCASE("empty graph but dependent set gets split") {
    const auto c = min_soft_cover_greedy(parity_four(), 0.0);
    CHECK(c.certified);
    CHECK(as_lists(c) == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3}});
  }
  SUBCASE("independent set") {
    const auto c = min_soft_cover_greedy(dt::independent_fair_bits(6), 0.0);
    CHECK(c.blocks.size() == 1);
  }
  SUBCASE("complete graph gives singletons") {
    const auto d = build_distribution({dt::bit("A"), dt::bit("B"), dt::bit("C")},
                                      {{{0, 0, 0}, 0.5}, {{1, 1, 1}, 0.5}});
    const auto c = min_soft_cover_greedy(d, 0.0);
    CHECK(c.blocks.size() == 3);
  }
  SUBCASE("never smaller than the exact optimum") {
    Rng rng(77);
    for (int trial = 0; trial < 15; ++trial) {
      const std::size_t k = 3 + rng.bits() % 6;  // 3..8
      const auto d = dt::random_distribution(rng, k, 2, 2);
      const double gamma = 0.02 * rng.uniform();
      const auto g = min_soft_cover_greedy(d, gamma);
      const auto e = min_soft_cover_exact(d, gamma);
      CHECK(g.certified);
      CHECK(e.certified);
      check_covers_all(g, k);
      CHECK(g.blocks.size() >= e.blocks.size());
    }
  }
}

TEST_CASE("fractional soft covers") {
  SUBCASE("independent set") {
    const auto r = fractional_soft_cover(dt::independent_fair_bits(4), 0.0);
    CHECK(r.chi_star == doctest::Approx(1.0));
    CHECK(r.exact);
    REQUIRE(r.cover.blocks.size() == 1);
    CHECK(r.cover.weights[0] == doctest::Approx(1.0));
  }
  SUBCASE("edge-shared 5-cycle") {
    const auto r = fractional_soft_cover(dt::edge_shared_c5(), 0.0);
    CHECK(std::abs(r.chi_star - 2.5) < 1e-6);
    CHECK(std::abs(r.dual_objective - 2.5) < 1e-6);
    CHECK(r.cover.certified);
  }
  SUBCASE("parity law") {
    const auto r = fractional_soft_cover(parity_four(), 0.0);
    CHECK(std::abs(r.chi_star - 4.0 / 3.0) < 1e-9);
    CHECK(r.exact);
  }
  SUBCASE("reduced cover is exact") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      const auto d = dt::random_distribution(rng, 5, 2, 2);
      const auto r = fractional_soft_cover(d, 0.01);
      if (!r.exact) continue;
      for (std::size_t i = 0; i < 5; ++i) {
        double w = 0.0;
        for (std::size_t j = 0; j < r.cover.blocks.size(); ++j)
          if (r.cover.blocks[j].contains(i)) w += r.cover.weights[j];
        CHECK(std::abs(w - 1.0) < 1e-9);
      }
      CHECK(std::abs(r.cover.size() - r.chi_star) < 1e-9);
    }
  }
}

TEST_CASE("cover numbers: monotone in gamma, fractional below integral") {
  Rng rng(6006);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = dt::random_distribution(rng, 6, 2, 2);
    const SeparationTable table(d, IndexSet::range(6));
    const std::vector<double> gammas{0.0, 0.002, 0.005, 0.01, 0.02, 0.05};
    double prev_chi = 1e9, prev_star = 1e9;
    for (double g : gammas) {
      const auto c = min_soft_cover_exact(table, g);
      const auto f = fractional_soft_cover(table, g);
      CHECK(c.size() <= prev_chi);
      CHECK(f.chi_star <= prev_star + 1e-9);
      CHECK(f.chi_star <= c.size() + 1e-9);
      CHECK(f.chi_star >= 1.0 - 1e-9);
      CHECK(c.size() <= 6.0);
      prev_chi = c.size();
      prev_star = f.chi_star;
    }
  }
}

TEST_CASE("exact cover is invariant under relabeling") {
  Rng rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = dt::random_distribution(rng, 5, 2, 2);
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 4; i > 0; --i) std::swap(perm[i], perm[rng.bits() % (i + 1)]);
    const auto p = dt::permute_vars(d, perm);
    const double gamma = 0.01;
    CHECK(min_soft_cover_exact(d, gamma).size() == min_soft_cover_exact(p, gamma).size());
    CHECK(std::abs(fractional_soft_cover(d, gamma).chi_star - fractional_soft_cover(p, gamma).chi_star) < 1e-9);
  }
}
