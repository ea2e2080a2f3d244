#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "depbound/covers.hpp"
#include "depbound/generators.hpp"
#include "depbound/io.hpp"
#include "depbound/mc_harness.hpp"

namespace depbound {

struct LowerBoundModel {
  std::size_t n = 8;
  std::size_t t = 1;
  double gamma = 0.0;
};

struct CascadeModel {
  Graph graph;
  double q = 0.5;
  double p = 0.05;
};

/// Stationary chain of length mu * nu. The window surrogate used for the
/// mixing bounds is window_alpha(spec, window_j, gap, window_w).
struct MarkovModel {
  MarkovSpec spec;
  std::size_t mu = 1;
  std::size_t nu = 1;
  std::size_t window_j = 1;
  std::size_t window_w = 1;
};

using ModelSpec = std::variant<LowerBoundModel, CascadeModel, MarkovModel>;

enum class CoverMode { Exact, Greedy, Fractional, Interleaved };

struct PipelineConfig {
  std::string name;
  ModelSpec model;
  /// Unset for interleaved covers means: use the certified block value.
  std::optional<double> gamma;
  CoverMode cover_mode = CoverMode::Exact;
  /// Bounds that decide the verdict, and bounds that are only reported.
  std::vector<std::string> bounds{"soft"};
  std::vector<std::string> report_only;
  bool optimize_lambda = false;
  std::vector<double> t_grid;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  /// Multiplies every evaluated bound; values below 1 exist to force failures.
  double bound_scale = 1.0;
  std::string csv_path;
  std::string summary_path;
};

/// Known generator and bound kinds are checked here; an empty grid is refused.
PipelineConfig pipeline_config_from_json(const Json& doc);
OrderedJson to_json(const PipelineConfig& config);
PipelineConfig load_pipeline_config(const std::string& path);

std::size_t model_size(const ModelSpec& model);

struct PipelineResult {
  std::string name;
  std::string stage;  // last stage entered
  std::size_t n = 0;
  std::optional<JointDistribution> law;
  SoftCover cover;
  double chi = 0.0;
  double expected_mean = 0.0;
  std::optional<TailEstimate> estimate;
  std::vector<std::vector<BoundResult>> bounds;  // per kind, per grid point
  std::vector<std::string> bound_kinds;
  ComparisonReport report;       // verdict-bearing rows
  ComparisonReport report_only;  // informational rows
  std::vector<std::string> notes;

  bool ok() const { return estimate.has_value() && report.violations == 0 && !report.rows.empty(); }
};

/// Exact law of models small enough to enumerate.
std::optional<JointDistribution> model_law(const ModelSpec& model);
/// One sample mean of the model, by direct simulation.
MeanSampler model_sampler(const ModelSpec& model);
double model_expected_mean(const ModelSpec& model);

/// Model, cover, bounds, tail estimate, comparison. `result` keeps whatever
/// was completed when a stage throws.
void run_pipeline(const PipelineConfig& config, PipelineResult& result, const TailOptions& options = {});
PipelineResult run_pipeline(const PipelineConfig& config, const TailOptions& options = {});

/// Tail estimate of the configured model only.
TailEstimate simulate(const PipelineConfig& config, const TailOptions& options = {});

OrderedJson summary_json(const PipelineResult& result);

}  // namespace depbound
