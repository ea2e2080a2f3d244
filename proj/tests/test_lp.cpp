#include <cmath>

#include "depbound/error.hpp"
#include "depbound/lp.hpp"
#include "depbound/rng.hpp"
#include "doctest.h"

using namespace depbound;

namespace {

void check_feasible(std::size_t k, const std::vector<std::uint64_t>& sets, const CoveringLpResult& r) {
  for (std::size_t i = 0; i < k; ++i) {
    double cover = 0.0;
    for (std::size_t j = 0; j < sets.size(); ++j)
      if ((sets[j] >> i) & 1U) cover += r.weights[j];
    CHECK(cover >= 1.0 - 1e-9);
  }
  for (std::size_t j = 0; j < sets.size(); ++j) {
    double load = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if ((sets[j] >> i) & 1U) load += r.packing[i];
    CHECK(load <= 1.0 + 1e-9);
  }
}

}  // namespace

TEST_CASE("covering LP on small instances") {
  SUBCASE("single set") {
    const auto r = solve_covering_lp(3, {0b111});
    CHECK(r.primal_objective == doctest::Approx(1.0));
    CHECK(r.dual_objective == doctest::Approx(1.0));
  }
  SUBCASE("singletons") {
    const auto r = solve_covering_lp(4, {1, 2, 4, 8});
    CHECK(r.primal_objective == doctest::Approx(4.0));
  }
  SUBCASE("independent sets of the 5-cycle") {
    std::vector<std::uint64_t> sets;
    for (int i = 0; i < 5; ++i) sets.push_back((1ULL << i) | (1ULL << ((i + 2) % 5)));
    const auto r = solve_covering_lp(5, sets);
    CHECK(std::abs(r.primal_objective - 2.5) < 1e-9);
    for (double w : r.weights) CHECK(w == doctest::Approx(0.5));
    check_feasible(5, sets, r);
  }
  SUBCASE("all 3-subsets of 4 elements") {
    const std::vector<std::uint64_t> sets{0b0111, 0b1011, 0b1101, 0b1110};
    const auto r = solve_covering_lp(4, sets);
    CHECK(std::abs(r.primal_objective - 4.0 / 3.0) < 1e-9);
  }
  SUBCASE("uncovered element") {
    try {
      solve_covering_lp(3, {0b011});
      FAIL("expected BlocksDoNotCover");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BlocksDoNotCover);
    }
  }
}

TEST_CASE("covering LP: strong duality on random families") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.bits() % 9;
    const std::uint64_t all = (1ULL << k) - 1;
    std::vector<std::uint64_t> sets;
    std::uint64_t covered = 0;
    const std::size_t m = 1 + rng.bits() % 15;
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t s = rng.bits() & all;
      if (s == 0) continue;
      sets.push_back(s);
      covered |= s;
    }
    for (std::size_t i = 0; i < k; ++i)
      if (!((covered >> i) & 1U)) sets.push_back(1ULL << i);
    const auto r = solve_covering_lp(k, sets);
    CHECK(std::abs(r.primal_objective - r.dual_objective) < 1e-9);
    CHECK(r.primal_objective >= 1.0 - 1e-9);
    CHECK(r.primal_objective <= static_cast<double>(k) + 1e-9);
    check_feasible(k, sets, r);
  }
}
