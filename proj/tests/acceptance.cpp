// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "depbound/alpha.hpp"
#include "depbound/bounds.hpp"
#include "depbound/covers.hpp"
#include "depbound/generators.hpp"
#include "depbound/io.hpp"
#include "depbound/pipeline.hpp"
#include "test_support.hpp"

using namespace depbound;

namespace {

const std::string kSource = DEPBOUND_SOURCE_DIR;

struct Check {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Check()>& body) {
  const auto start = Clock::now();
  Check r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0.0 && secs > limit_s) {
    r.pass = false;
    r.detail += " [over the " + std::to_string(static_cast<int>(limit_s)) + " s budget]";
  }
  if (!r.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s) %s\n", r.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              r.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

IndexSet random_subset(Rng& rng, std::size_t k, std::uint64_t forbidden) {
  std::uint64_t m = 0;
  while (m == 0) m = rng.bits() & ((std::uint64_t{1} << k) - 1) & ~forbidden;
  return IndexSet::from_mask(m);
}

// ---------------------------------------------------------------------------

Check alpha_oracle() {
  Rng rng(1001);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const std::size_t k = 2 + rng.bits() % 2;
    const auto d = testing::random_distribution(rng, k, 3);
    const auto left = random_subset(rng, k, 0);
    if (left.size() == k) continue;
    const auto right = random_subset(rng, k, left.mask());
    worst = std::max(worst, std::abs(alpha_dependence(d, left, right) - alpha_dependence_bruteforce(d, left, right)));
    ++done;
  }
  return {worst <= 1e-12, "100 instances, max |fast - brute| = " + fmt("%.3g", worst)};
}

Check ordering_dp() {
  Rng rng(2002);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + rng.bits() % 5;
    const auto d = testing::random_distribution(rng, k, k <= 4 ? 3 : 2);
    const auto all = IndexSet::range(k);
    const double dp = alpha_separation(d, all, SeparationMode::ExactDp).value;
    const double bf = alpha_separation(d, all, SeparationMode::BruteForce).value;
    worst = std::max(worst, std::abs(dp - bf));
  }
  return {worst <= 1e-12, "50 instances with k <= 6, max |dp - brute| = " + fmt("%.3g", worst)};
}

Check lower_bound_suite() {
  std::size_t points = 0, bad = 0;
  double worst_marg = 0.0, worst_fact = 0.0, worst_alpha = 0.0, worst_tail = 0.0;
  for (std::size_t n : {4, 6, 8}) {
    const double nd = static_cast<double>(n);
    for (std::size_t t = 0; 8 * t <= n; ++t) {
      for (double frac : {0.0, 0.25, 0.5, 1.0}) {
        const double gamma = frac / (4.0 * nd);
        const double eps = 4.0 * nd * gamma;
        const auto d = lower_bound_distribution(n, t, gamma);
        ++points;
        for (std::size_t v = 0; v < n; ++v) worst_marg = std::max(worst_marg, std::abs(mean(d, v) - 0.5));
        for (std::size_t drop = 0; drop < n; ++drop) {
          std::vector<std::size_t> keep;
          for (std::size_t v = 0; v < n; ++v)
            if (v != drop) keep.push_back(v);
          const auto m = marginal(d, IndexSet(keep));
          const double cell = std::ldexp(1.0, -static_cast<int>(n - 1));
          // every one of the 2^(n-1) cells must be present with mass 2^-(n-1)
          if (m.entries().size() != (std::size_t{1} << (n - 1))) worst_fact = 1.0;
          for (const auto& e : m.entries()) worst_fact = std::max(worst_fact, std::abs(e.p - cell));
        }
        const double a = alpha_separation(d, IndexSet::range(n), SeparationMode::ExactDp).value;
        worst_alpha = std::max(worst_alpha, std::abs(a - eps / (4.0 * nd)));
        double tail = 0.0;
        for (const auto& e : d.entries())
          if (static_cast<std::size_t>(std::popcount(e.code)) >= n / 2 + t) tail += e.p;
        worst_tail = std::max(worst_tail, std::abs(tail - exact_tail_lower_model(n, t, gamma)));
        if (tail < lower_bound_tail(n, t, a).value) ++bad;
      }
    }
  }
  const bool ok = worst_marg <= 1e-15 && worst_fact <= 1e-12 && worst_alpha <= 1e-12 && worst_tail <= 1e-12 && bad == 0;
  return {ok, std::to_string(points) + " grid points; marginal err " + fmt("%.2g", worst_marg) + ", factorization err " +
                  fmt("%.2g", worst_fact) + ", alpha_seq err " + fmt("%.2g", worst_alpha) + ", tail err " +
                  fmt("%.2g", worst_tail) + ", lower-bound failures " + std::to_string(bad)};
}

Check cascade_lemma() {
  std::size_t checked = 0, violations = 0;
  double tightest = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<IndexSet> sets;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const int c = std::popcount(m);
      if (c == 2 || c == 3) sets.push_back(IndexSet::from_mask(m));
    }
    const auto chain = Graph::chain(n);
    for (double q : {0.1, 0.5, 0.9}) {
      for (double p : {0.01, 0.05, 0.1, 0.2}) {
        const auto d = cascade_exact(chain, q, p);
        const SeparationTable table(d, IndexSet::range(n));
        for (const auto& s : sets) {
          const double a = table.separation(s.mask());
          const double bound = cascade_chain_lemma_bound(s.size(), chain.set_distance(s), p);
          ++checked;
          if (a > bound) ++violations;
          tightest = std::max(tightest, a / bound);
        }
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " (chain, q, p, I) cases, " + std::to_string(violations) +
                               " violations, largest alpha_seq / bound = " + fmt("%.3g", tightest)};
}

Check domination() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"lower_bound_n8", "cascade_chain12", "markov_mixing24"}) {
    const auto start = Clock::now();
    const auto config = load_pipeline_config(kSource + "/configs/" + name + ".json");
    const auto r = run_pipeline(config);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool part_ok = r.ok() && secs < 120.0;
    ok = ok && part_ok;
    detail += std::string(name) + ": chi " + fmt("%g", r.chi) + ", " + std::to_string(r.report.ok) + " OK / " +
              std::to_string(r.report.violations) + " VIOLATION, " + fmt("%.1f s", secs);
    if (!r.report_only.rows.empty()) {
      std::size_t ro_ok = 0, ro_bad = 0;
      for (const auto& row : r.report_only.rows)
        if (row.bound_kind == "mixing") ++(row.verdict == Verdict::Ok ? ro_ok : ro_bad);
      if (std::holds_alternative<MarkovModel>(config.model))
        detail += "; mixing bound with window surrogate (report-only): " + std::to_string(ro_ok) + " OK / " +
                  std::to_string(ro_bad) + " VIOLATION";
    }
    detail += "; ";
  }
  return {ok, detail};
}

Check cover_structure() {
  Rng rng(6006);
  const std::vector<double> grid{0.0, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.25};
  std::size_t monotone_breaks = 0, lp_breaks = 0;
  for (int i = 0; i < 20; ++i) {
    const auto d = testing::random_distribution(rng, 6, 2, 2);
    const SeparationTable table(d, IndexSet::range(6));
    double prev = 1e9;
    for (double g : grid) {
      const double chi = min_soft_cover_exact(table, g).size();
      const double chi_star = fractional_soft_cover(table, g).chi_star;
      if (chi > prev) ++monotone_breaks;
      if (chi_star > chi + 1e-9) ++lp_breaks;
      prev = chi;
    }
  }
  const double c5 = fractional_soft_cover(testing::edge_shared_c5(), 0.0).chi_star;
  const bool ok = monotone_breaks == 0 && lp_breaks == 0 && std::abs(c5 - 2.5) <= 1e-6;
  return {ok, "20 instances x " + std::to_string(grid.size()) + " thresholds: " + std::to_string(monotone_breaks) +
                  " monotonicity breaks, " + std::to_string(lp_breaks) + " cases chi* > chi; C5 chi* = " +
                  fmt("%.9f", c5)};
}

Check chain_and_lattice() {
  const auto d = load_distribution(kSource + "/fixtures/markov_chain5.json");
  const double a2 = window_alpha(d, 1, 2, 1), a3 = window_alpha(d, 1, 3, 1);
  const double gamma = (a2 + a3) / 2.0;
  auto cover = min_soft_cover_greedy(d, gamma);
  auto blocks = cover.blocks;
  std::sort(blocks.begin(), blocks.end());
  const bool fig1 = cover.certified && blocks == std::vector<IndexSet>{{0, 3}, {1, 4}, {2}};

  const std::size_t w = 5, h = 5;
  const auto groups = distance_partition(w, h, 3);
  std::vector<int> seen(w * h, 0);
  std::size_t closest = w + h;
  for (const auto& g : groups) {
    for (std::size_t a : g) ++seen[a];
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const long dx = static_cast<long>(g[i] % w) - static_cast<long>(g[j] % w);
        const long dy = static_cast<long>(g[i] / w) - static_cast<long>(g[j] / w);
        closest = std::min(closest, static_cast<std::size_t>(std::labs(dx) + std::labs(dy)));
      }
  }
  const bool partition = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
  const bool fig3 = groups.size() == 5 && partition && closest >= 3;
  std::string b;
  for (const auto& blk : blocks) {
    b += "{";
    for (std::size_t i = 0; i < blk.size(); ++i) b += (i ? "," : "") + std::to_string(blk[i] + 1);
    b += "}";
  }
  return {fig1 && fig3, "five-step chain: gamma " + fmt("%.4g", gamma) + " in (" + fmt("%.4g", a3) + ", " + fmt("%.4g", a2) +
                            "), cover " + b + (cover.certified ? " certified" : " NOT certified") + "; 5x5 lattice: " +
                            std::to_string(groups.size()) + " groups, partition " + (partition ? "yes" : "no") +
                            ", smallest in-group distance " + std::to_string(closest)};
}

Check spot_checks() {
  double worst = 0.0;
  auto track = [&](double got, double want, double tol) {
    const double e = std::abs(got - want);
    worst = std::max(worst, e / tol);
    return e <= tol;
  };
  bool ok = true;
  ok &= track(soft_cover_bound(100, 0.2, 0.1, 0.0, 2.0).value, std::exp(-1.0), 1e-12);
  ok &= track(lp_distance_bound(1.0, 0.001, 1.0), 0.036, 1e-15);
  ok &= track(lower_bound_tail(8, 1, 0.0).value, std::exp(-2.0) / 15.0, 1e-12);
  for (double beta : {0.1, 0.5, 1.0}) {
    const auto d = ising_exact({2, 1, beta, 1, std::nullopt});
    const double corr = product_moment(d, {0, 1}) - mean(d, 0) * mean(d, 1);
    ok &= track(corr, -std::tanh(beta), 1e-12);
  }
  return {ok, "6 values, worst error / tolerance = " + fmt("%.3g", worst)};
}

Check contraction() {
  Rng rng(9009);
  std::size_t breaks = 0;
  double worst = -1.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + rng.bits() % 4;
    const auto d = testing::random_distribution(rng, k, 3, 2);
    const double before = alpha_separation(d, IndexSet::range(k), SeparationMode::ExactDp).value;
    auto f = d;
    for (std::size_t v = 0; v < k; ++v) {
      std::vector<double> image(d.radix(v));
      for (auto& x : image) x = static_cast<double>(rng.bits() % 3);  // collisions are likely
      f = pushforward(f, v, image);
    }
    const double after = alpha_separation(f, IndexSet::range(k), SeparationMode::ExactDp).value;
    if (after > before + 1e-12) ++breaks;
    worst = std::max(worst, after - before);
  }
  return {breaks == 0, "50 pairs, " + std::to_string(breaks) + " increases, max(after - before) = " + fmt("%.3g", worst)};
}

}  // namespace

int main() {
  report(1, "alpha-dependence fast kernel equals brute force", 10.0, alpha_oracle);
  report(2, "ordering DP equals brute force", 60.0, ordering_dp);
  report(3, "lower-bound model suite", 30.0, lower_bound_suite);
  report(4, "cascade chain lemma certification", 300.0, cascade_lemma);
  report(5, "bound domination end to end", 360.0, domination);
  report(6, "cover structure", 0.0, cover_structure);
  report(7, "chain cover and lattice partition", 0.0, chain_and_lattice);
  report(8, "formula spot checks", 0.0, spot_checks);
  report(9, "contraction under per-variable maps", 0.0, contraction);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
