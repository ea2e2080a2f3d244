#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "depbound/bounds.hpp"
#include "depbound/dist.hpp"
#include "depbound/execution.hpp"
#include "depbound/generators.hpp"
#include "depbound/rng.hpp"

namespace depbound {

struct ConfidenceInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact two-sided binomial interval at the given confidence level.
ConfidenceInterval clopper_pearson(std::size_t successes, std::size_t trials, double level = 0.99);

struct TailEstimate {
  std::vector<double> t_grid;
  std::vector<std::size_t> exceedances;
  std::vector<double> estimates;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double expected_mean = 0.0;
  double level = 0.99;
};

/// Draws one sample mean of the model. Must be safe to call concurrently with
/// distinct generators.
using MeanSampler = std::function<double(Rng&)>;

struct TailOptions {
  Exec exec = Exec::Parallel;
  /// Draws per random stream; chunk c uses Rng::stream(seed, c), so the
  /// result does not depend on the thread count.
  std::size_t chunk = 4096;
  double level = 0.99;
  /// A draw exceeds t when mean - expected_mean >= t - tolerance.
  double tolerance = 1e-12;
};

TailEstimate estimate_tail(const MeanSampler& sampler, double expected_mean, std::vector<double> t_grid,
                           std::size_t samples, std::uint64_t seed, const TailOptions& options = {});

enum class Verdict { Ok, Violation };

struct ComparisonRow {
  double t = 0.0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double bound_value = 0.0;
  std::string bound_kind;
  Verdict verdict = Verdict::Ok;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::size_t ok = 0;
  std::size_t violations = 0;
};

/// A grid point is OK when the raw bound value is at least the lower end of
/// the confidence interval.
ComparisonReport compare_bounds(const TailEstimate& estimate, const std::vector<BoundResult>& bounds);

/// Columns: t, estimate, ci_low, ci_high, bound_value, bound_kind, verdict.
void write_csv(const ComparisonReport& report, std::ostream& out);

std::string to_string(Verdict v);

// ---------------------------------------------------------------------------

struct ProbeRow {
  std::size_t graph = 0;  // position in the input list
  double p = 0.0;
  IndexSet set;
  std::size_t d = 0;
  double alpha_seq = 0.0;
  /// Chain bound |I|^2 ((4p)^d + 3 p^d); only for chain graphs with p < 1/4.
  bool lemma_applies = false;
  double lemma_bound = 0.0;
  bool lemma_ok = true;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  /// Least-squares fit of log alpha = log C + d log(c p) over rows with alpha > 0.
  double fit_C = 0.0;
  double fit_c = 0.0;
  /// Smallest C with alpha <= C (fit_c p)^d on every fitted row.
  double envelope_C = 0.0;
  std::size_t fitted_rows = 0;
  std::size_t lemma_violations = 0;
};

/// Exact alpha_seq of every set on every graph and p. Sets that do not fit a
/// graph are skipped for it.
ProbeTable conjecture_probe(const std::vector<Graph>& graphs, double q, const std::vector<double>& p_grid,
                            const std::vector<IndexSet>& sets);

}  // namespace depbound
