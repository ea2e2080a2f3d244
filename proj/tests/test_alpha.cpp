#include <cmath>

#include "alpha_kernels.hpp"
#include "depbound/alpha.hpp"
#include "depbound/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace depbound;
namespace dt = depbound::testing;

TEST_CASE("alpha_dependence on fixtures") {
  CHECK(alpha_dependence(dt::independent_fair_bits(2), IndexSet{0}, IndexSet{1}) == doctest::Approx(0.0));
  CHECK(alpha_dependence(dt::correlated_bits(), IndexSet{0}, IndexSet{1}) == doctest::Approx(0.25));
  CHECK(alpha_dependence_bruteforce(dt::correlated_bits(), IndexSet{0}, IndexSet{1}) == doctest::Approx(0.25));

  SUBCASE("constant pushforward kills the dependence") {
    const auto f = pushforward(dt::correlated_bits(), 0, [](double) { return 7.0; });
    CHECK(alpha_dependence(f, IndexSet{0}, IndexSet{1}) == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(alpha_dependence(dt::correlated_bits(), IndexSet{0}, IndexSet{0}), Error);
    CHECK_THROWS_AS(alpha_dependence(dt::correlated_bits(), IndexSet{}, IndexSet{1}), Error);
    try {
      alpha_dependence(dt::correlated_bits(), IndexSet{0}, IndexSet{0, 1});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OverlappingIndexSets);
    }
  }
  SUBCASE("event cap") {
    Rng rng(1);
    const auto d = dt::random_distribution(rng, 2, 6, 6);
    AlphaOptions tight;
    tight.event_cap = 16;
    try {
      alpha_dependence(d, IndexSet{0}, IndexSet{1}, tight);
      FAIL("expected SupportTooLarge");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SupportTooLarge);
    }
  }
}

TEST_CASE("fast alpha matches the double-enumeration oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.bits() % 2;
    const auto d = dt::random_distribution(rng, k, 3);
    const IndexSet left{0};
    const IndexSet right = k == 2 ? IndexSet{1} : IndexSet{1, 2};
    const double fast = alpha_dependence(d, left, right);
    const double slow = alpha_dependence_bruteforce(d, left, right);
    CHECK(std::abs(fast - slow) < 1e-12);
    // symmetry and range
    CHECK(std::abs(alpha_dependence(d, right, left) - fast) < 1e-12);
    CHECK(fast >= 0.0);
    CHECK(fast <= 0.25 + 1e-15);
  }
}

TEST_CASE("degenerate variable has zero alpha") {
  const auto d = build_distribution({{"C", {3.0}}, dt::bit("B")}, {{{0, 0}, 0.4}, {{0, 1}, 0.6}});
  CHECK(alpha_dependence(d, IndexSet{0}, IndexSet{1}) == 0.0);
  CHECK(alpha_dependence_bruteforce(d, IndexSet{0}, IndexSet{1}) == 0.0);
}

TEST_CASE("complement invariance of the event deviation") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = dt::random_distribution(rng, 2, 4, 2);
    const auto na = d.radix(0), nb = d.radix(1);
    const std::uint64_t b = rng.bits() % (1U << na);
    const std::uint64_t c = rng.bits() % (1U << nb);
    auto dev = [&](std::uint64_t bset) {
      double pbc = 0, pb = 0, pc = 0;
      for (const auto& e : d.entries()) {
        const bool in_b = (bset >> d.index_of(e.code, 0)) & 1U;
        const bool in_c = (c >> d.index_of(e.code, 1)) & 1U;
        pbc += (in_b && in_c) ? e.p : 0.0;
        pb += in_b ? e.p : 0.0;
        pc += in_c ? e.p : 0.0;
      }
      return std::abs(pbc - pb * pc);
    };
    CHECK(std::abs(dev(b) - dev(~b & ((1U << na) - 1))) < 1e-15);
  }
}

TEST_CASE("OpenMP event kernel agrees with the serial reference") {
  Rng rng(8);
  const auto d = dt::random_distribution(rng, 2, 14, 13);
  const auto table = detail::make_contingency(d, IndexSet{0}, IndexSet{1});
  REQUIRE(table.num_rows() >= 12);  // forces several chunks
  const double s = detail::event_sup_serial(table);
  const double p = detail::event_sup_parallel(table);
  CHECK(std::abs(s - p) < 1e-13);
  CHECK(s > 0.0);
}

TEST_CASE("alpha_separation") {
  SUBCASE("single variable") {
    const auto r = alpha_separation(dt::correlated_bits(), IndexSet{1}, SeparationMode::ExactDp);
    CHECK(r.value == 0.0);
    CHECK(r.ordering.perm == std::vector<std::size_t>{1});
  }
  SUBCASE("correlated pair") {
    const auto r = alpha_separation(dt::correlated_bits(), IndexSet{0, 1}, SeparationMode::ExactDp);
    CHECK(r.value == doctest::Approx(0.125));
    CHECK(r.ordering.perm == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("caps") {
    const auto d = dt::independent_fair_bits(9);
    CHECK_THROWS_AS(alpha_separation(d, IndexSet::range(9), SeparationMode::BruteForce), Error);
  }
}

TEST_CASE("exact DP equals permutation enumeration; greedy is never better") {
  Rng rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k = 2 + rng.bits() % 4;  // 2..5
    const auto d = dt::random_distribution(rng, k, 2, 2);
    const auto vars = IndexSet::range(k);
    const auto dp = alpha_separation(d, vars, SeparationMode::ExactDp);
    const auto bf = alpha_separation(d, vars, SeparationMode::BruteForce);
    const auto gr = alpha_separation(d, vars, SeparationMode::Greedy);
    CHECK(std::abs(dp.value - bf.value) < 1e-12);
    CHECK(dp.ordering.perm == bf.ordering.perm);
    CHECK(gr.value >= dp.value - 1e-12);

    // the returned ordering attains the returned value
    double sum = 0.0;
    for (double t : dp.terms) sum += t;
    CHECK(std::abs(sum / static_cast<double>(k) - dp.value) < 1e-12);
  }
}

TEST_CASE("separation table: serial and parallel agree bit for bit") {
  Rng rng(31);
  const auto d = dt::random_distribution(rng, 6, 2, 2);
  AlphaOptions serial;
  serial.exec = Exec::Serial;
  const SeparationTable a(d, IndexSet::range(6), serial);
  const SeparationTable b(d, IndexSet::range(6));
  for (std::uint64_t m = 1; m < 64; ++m) {
    CHECK(a.separation(m) == b.separation(m));
    CHECK(a.ordering(m).perm == b.ordering(m).perm);
  }
}

TEST_CASE("contraction under per-variable maps") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = dt::random_distribution(rng, 3, 3, 2);
    auto f = d;
    for (std::size_t v = 0; v < 3; ++v) {
      std::vector<double> image;
      for (std::size_t s = 0; s < f.radix(v); ++s) image.push_back(static_cast<double>(rng.bits() % 2));
      f = pushforward(f, v, image);
    }
    const auto before = alpha_separation(d, IndexSet::range(3), SeparationMode::ExactDp).value;
    const auto after = alpha_separation(f, IndexSet::range(3), SeparationMode::ExactDp).value;
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("approximation_deviation_bound") {
  CHECK(approximation_deviation_bound(4, 0.0, 1.0, 0.5) == 0.0);
  CHECK(approximation_deviation_bound(10, 0.001, 1.0, 0.25) == doctest::Approx(0.36).epsilon(1e-12));
  const double a = approximation_deviation_bound(5, 0.01, 2.0, 0.1);
  const double b = approximation_deviation_bound(5, 0.01, 2.0, 0.2);
  CHECK(b == doctest::Approx(a / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(approximation_deviation_bound(5, 0.01, 2.0, 0.0), Error);
}
