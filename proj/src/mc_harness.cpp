#include "depbound/mc_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>

#include <boost/math/special_functions/beta.hpp>

#include "depbound/alpha.hpp"
#include "depbound/error.hpp"

namespace depbound {

ConfidenceInterval clopper_pearson(std::size_t successes, std::size_t trials, double level) {
  require(trials >= 1, ErrorKind::DomainViolation, "need at least one trial");
  require(successes <= trials, ErrorKind::DomainViolation, "more successes than trials");
  require(level > 0.0 && level < 1.0, ErrorKind::DomainViolation, "confidence level must lie in (0, 1)");
  const double a = 1.0 - level;
  const double x = static_cast<double>(successes), n = static_cast<double>(trials);
  ConfidenceInterval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, a / 2.0);
  ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - a / 2.0);
  return ci;
}

TailEstimate estimate_tail(const MeanSampler& sampler, double expected_mean, std::vector<double> t_grid,
                           std::size_t samples, std::uint64_t seed, const TailOptions& options) {
  require(!t_grid.empty(), ErrorKind::EmptyGrid, "threshold grid is empty");
  require(std::is_sorted(t_grid.begin(), t_grid.end()), ErrorKind::DomainViolation, "threshold grid must be ascending");
  require(samples >= 1, ErrorKind::DomainViolation, "need at least one sample");
  require(options.chunk >= 1, ErrorKind::DomainViolation, "chunk size must be positive");

  const std::size_t g = t_grid.size();
  const std::size_t chunks = (samples + options.chunk - 1) / options.chunk;
  std::vector<std::size_t> counts(chunks * g, 0);
  std::exception_ptr failure;

  auto run_chunk = [&](std::size_t c) {
    Rng rng = Rng::stream(seed, c);
    const std::size_t begin = c * options.chunk;
    const std::size_t end = std::min(samples, begin + options.chunk);
    std::size_t* local = &counts[c * g];
    for (std::size_t s = begin; s < end; ++s) {
      const double dev = sampler(rng) - expected_mean;
      // grid is ascending: every t up to the first miss is exceeded
      for (std::size_t i = 0; i < g && dev >= t_grid[i] - options.tolerance; ++i) ++local[i];
    }
  };

  if (options.exec == Exec::Parallel) {
    const auto nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < nchunks; ++c) {
      try {
        run_chunk(static_cast<std::size_t>(c));
      } catch (...) {
#pragma omp critical(depbound_mc_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }

  TailEstimate est;
  est.t_grid = std::move(t_grid);
  est.sample_count = samples;
  est.seed = seed;
  est.expected_mean = expected_mean;
  est.level = options.level;
  est.exceedances.assign(g, 0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t i = 0; i < g; ++i) est.exceedances[i] += counts[c * g + i];
  for (std::size_t i = 0; i < g; ++i) {
    const auto ci = clopper_pearson(est.exceedances[i], samples, options.level);
    est.estimates.push_back(static_cast<double>(est.exceedances[i]) / static_cast<double>(samples));
    est.ci_low.push_back(ci.low);
    est.ci_high.push_back(ci.high);
  }
  return est;
}

ComparisonReport compare_bounds(const TailEstimate& estimate, const std::vector<BoundResult>& bounds) {
  require(bounds.size() == estimate.t_grid.size(), ErrorKind::GridMismatch,
          "got " + std::to_string(bounds.size()) + " bounds for " + std::to_string(estimate.t_grid.size()) +
              " grid points");
  ComparisonReport rep;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    ComparisonRow row;
    row.t = estimate.t_grid[i];
    row.estimate = estimate.estimates[i];
    row.ci_low = estimate.ci_low[i];
    row.ci_high = estimate.ci_high[i];
    row.bound_value = bounds[i].value;
    row.bound_kind = bounds[i].kind;
    row.verdict = row.bound_value >= row.ci_low ? Verdict::Ok : Verdict::Violation;
    ++(row.verdict == Verdict::Ok ? rep.ok : rep.violations);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string to_string(Verdict v) { return v == Verdict::Ok ? "OK" : "VIOLATION"; }

namespace {

// shortest text that reads back as the same double
std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void write_csv(const ComparisonReport& report, std::ostream& out) {
  out << "t,estimate,ci_low,ci_high,bound_value,bound_kind,verdict\n";
  for (const auto& r : report.rows) {
    out << shortest(r.t) << ',' << shortest(r.estimate) << ',' << shortest(r.ci_low) << ',' << shortest(r.ci_high)
        << ',' << shortest(r.bound_value) << ',' << r.bound_kind << ',' << to_string(r.verdict) << '\n';
  }
}

// ---------------------------------------------------------------------------

ProbeTable conjecture_probe(const std::vector<Graph>& graphs, double q, const std::vector<double>& p_grid,
                            const std::vector<IndexSet>& sets) {
  ProbeTable table;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    std::vector<const IndexSet*> fitting;
    for (const auto& s : sets)
      if (!s.empty() && s.values().back() < g.n) fitting.push_back(&s);
    for (double p : p_grid) {
      const auto dist = cascade_exact(g, q, p);
      for (const auto* s : fitting) {
        ProbeRow row;
        row.graph = gi;
        row.p = p;
        row.set = *s;
        row.d = g.set_distance(*s);
        row.alpha_seq = alpha_separation(dist, *s, SeparationMode::ExactDp).value;
        row.lemma_applies = g.kind == GraphKind::Chain && p < 0.25 && s->size() >= 2;
        if (row.lemma_applies) {
          row.lemma_bound = cascade_chain_lemma_bound(s->size(), row.d, p);
          row.lemma_ok = row.alpha_seq <= row.lemma_bound + 1e-12;
          if (!row.lemma_ok) ++table.lemma_violations;
        }
        table.rows.push_back(std::move(row));
      }
    }
  }

  // log(alpha) - d log p = log C + d log c
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& r : table.rows) {
    if (r.alpha_seq <= 0.0 || r.p <= 0.0 || r.d == std::numeric_limits<std::size_t>::max()) continue;
    const double x = static_cast<double>(r.d);
    const double y = std::log(r.alpha_seq) - x * std::log(r.p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  table.fitted_rows = m;
  if (m == 0) return table;
  const double md = static_cast<double>(m);
  const double var = sxx - sx * sx / md;
  const double slope = var > 0.0 ? (sxy - sx * sy / md) / var : 0.0;
  const double intercept = (sy - slope * sx) / md;
  table.fit_c = std::exp(slope);
  table.fit_C = std::exp(intercept);
  for (const auto& r : table.rows) {
    if (r.alpha_seq <= 0.0 || r.p <= 0.0 || r.d == std::numeric_limits<std::size_t>::max()) continue;
    table.envelope_C =
        std::max(table.envelope_C, r.alpha_seq / std::pow(table.fit_c * r.p, static_cast<double>(r.d)));
  }
  return table;
}

}  // namespace depbound
