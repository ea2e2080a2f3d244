#include "depbound/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <set>

#include "depbound/alpha.hpp"
#include "depbound/bounds.hpp"
#include "depbound/error.hpp"

namespace depbound {

namespace {

const std::set<std::string> kBoundKinds{"soft", "fractional", "hoeffding", "janson", "variance", "mixing", "bosq"};

const Json& field(const Json& doc, const char* key) {
  require(doc.is_object() && doc.contains(key), ErrorKind::Parse, std::string("missing field '") + key + "'");
  return doc.at(key);
}

template <class T>
T get_or(const Json& doc, const char* key, T fallback) {
  if (!doc.is_object() || !doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("field '") + key + "': " + e.what());
  }
}

std::vector<std::string> kinds(const Json& doc, const char* key, std::vector<std::string> fallback) {
  auto out = get_or(doc, key, fallback);
  for (const auto& k : out) require(kBoundKinds.count(k) == 1, ErrorKind::Parse, "unknown bound kind '" + k + "'");
  return out;
}

ModelSpec model_from_json(const Json& doc) {
  const auto kind = get_or<std::string>(doc, "kind", "");
  if (kind == "lower_bound") {
    LowerBoundModel m;
    m.n = field(doc, "n").get<std::size_t>();
    m.t = get_or<std::size_t>(doc, "t", 1);
    m.gamma = get_or<double>(doc, "gamma", 0.0);
    return m;
  }
  if (kind == "cascade") {
    CascadeModel m;
    m.graph = graph_from_json(field(doc, "graph"));
    m.q = get_or<double>(doc, "q", 0.5);
    m.p = field(doc, "p").get<double>();
    return m;
  }
  if (kind == "markov") {
    MarkovModel m;
    m.mu = field(doc, "mu").get<std::size_t>();
    m.nu = field(doc, "nu").get<std::size_t>();
    Json spec = doc;
    spec["length"] = m.mu * m.nu;
    m.spec = markov_from_json(spec);
    if (doc.contains("window")) {
      m.window_j = get_or<std::size_t>(doc.at("window"), "j", 1);
      m.window_w = get_or<std::size_t>(doc.at("window"), "w", 1);
    }
    return m;
  }
  throw Error(ErrorKind::Parse, "unknown model kind '" + kind + "'");
}

OrderedJson model_json(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> OrderedJson {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LowerBoundModel>) {
          return {{"kind", "lower_bound"}, {"n", m.n}, {"t", m.t}, {"gamma", m.gamma}};
        } else if constexpr (std::is_same_v<M, CascadeModel>) {
          return {{"kind", "cascade"}, {"graph", to_json(m.graph)}, {"q", m.q}, {"p", m.p}};
        } else {
          return {{"kind", "markov"},
                  {"states", m.spec.states},
                  {"transition", m.spec.transition},
                  {"mu", m.mu},
                  {"nu", m.nu},
                  {"window", {{"j", m.window_j}, {"w", m.window_w}}}};
        }
      },
      model);
}

const char* mode_name(CoverMode m) {
  switch (m) {
    case CoverMode::Exact: return "exact";
    case CoverMode::Greedy: return "greedy";
    case CoverMode::Fractional: return "fractional";
    case CoverMode::Interleaved: return "interleaved";
  }
  return "?";
}

CoverMode mode_from_name(const std::string& s) {
  for (auto m : {CoverMode::Exact, CoverMode::Greedy, CoverMode::Fractional, CoverMode::Interleaved})
    if (s == mode_name(m)) return m;
  throw Error(ErrorKind::Parse, "unknown cover mode '" + s + "'");
}

BoundResult scaled(BoundResult b, double scale) {
  if (scale == 1.0) return b;
  b.value = 0.0;
  for (auto& t : b.terms) {
    t.value *= scale;
    b.value += t.value;
  }
  b.clipped = std::min(b.value, 1.0);
  b.params.emplace_back("bound_scale", scale);
  return b;
}

RangeSpec ranges_of(const ModelSpec& model, const std::optional<JointDistribution>& law) {
  RangeSpec r;
  if (law) {
    for (const auto& v : law->vars()) r.bounds.emplace_back(v.support.front(), v.support.back());
    return r;
  }
  const auto& m = std::get<MarkovModel>(model);
  const auto [lo, hi] = std::minmax_element(m.spec.states.begin(), m.spec.states.end());
  r.bounds.assign(m.spec.length, {*lo, *hi});
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

PipelineConfig pipeline_config_from_json(const Json& doc) {
  try {
    require(doc.is_object(), ErrorKind::Parse, "a pipeline config is a JSON object");
    PipelineConfig c;
    c.name = get_or<std::string>(doc, "name", "pipeline");
    c.model = model_from_json(field(doc, "model"));
    if (doc.contains("cover")) {
      const auto& cov = doc.at("cover");
      c.cover_mode = mode_from_name(get_or<std::string>(cov, "mode", "exact"));
      if (cov.contains("gamma") && !cov.at("gamma").is_null()) c.gamma = cov.at("gamma").get<double>();
    }
    require(c.gamma.has_value() || c.cover_mode == CoverMode::Interleaved, ErrorKind::Parse,
            "cover.gamma is required unless the cover is interleaved");
    require(c.cover_mode != CoverMode::Interleaved || std::holds_alternative<MarkovModel>(c.model), ErrorKind::Parse,
            "interleaved covers need a markov model");
    c.bounds = kinds(doc, "bounds", {"soft"});
    c.report_only = kinds(doc, "report_only", {});
    require(!c.bounds.empty() || !c.report_only.empty(), ErrorKind::Parse, "no bound kinds given");
    const auto lambda = get_or<std::string>(doc, "lambda", "half");
    require(lambda == "half" || lambda == "optimize", ErrorKind::Parse, "lambda must be 'half' or 'optimize'");
    c.optimize_lambda = lambda == "optimize";
    c.t_grid = field(doc, "t_grid").get<std::vector<double>>();
    require(!c.t_grid.empty(), ErrorKind::EmptyGrid, "t_grid is empty");
    c.samples = get_or<std::size_t>(doc, "samples", c.samples);
    c.seed = get_or<std::uint64_t>(doc, "seed", c.seed);
    c.bound_scale = get_or<double>(doc, "bound_scale", 1.0);
    if (doc.contains("output")) {
      c.csv_path = get_or<std::string>(doc.at("output"), "csv", "");
      c.summary_path = get_or<std::string>(doc.at("output"), "summary", "");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("pipeline config: ") + e.what());
  }
}

OrderedJson to_json(const PipelineConfig& c) {
  OrderedJson doc;
  doc["name"] = c.name;
  doc["model"] = model_json(c.model);
  doc["cover"] = {{"mode", mode_name(c.cover_mode)}, {"gamma", c.gamma ? OrderedJson(*c.gamma) : OrderedJson()}};
  doc["bounds"] = c.bounds;
  doc["report_only"] = c.report_only;
  doc["lambda"] = c.optimize_lambda ? "optimize" : "half";
  doc["t_grid"] = c.t_grid;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  doc["bound_scale"] = c.bound_scale;
  doc["output"] = {{"csv", c.csv_path}, {"summary", c.summary_path}};
  return doc;
}

PipelineConfig load_pipeline_config(const std::string& path) { return pipeline_config_from_json(read_json_file(path)); }

std::size_t model_size(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LowerBoundModel>) return m.n;
        else if constexpr (std::is_same_v<M, CascadeModel>) return m.graph.n;
        else return m.spec.length;
      },
      model);
}

std::optional<JointDistribution> model_law(const ModelSpec& model) {
  if (const auto* m = std::get_if<LowerBoundModel>(&model)) return lower_bound_distribution(m->n, m->t, m->gamma);
  if (const auto* m = std::get_if<CascadeModel>(&model)) return cascade_exact(m->graph, m->q, m->p);
  const auto& m = std::get<MarkovModel>(model);
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < m.spec.length && cells <= kMaxJointEntries; ++i) cells *= m.spec.states.size();
  if (cells > kMaxJointEntries) return std::nullopt;
  return markov_process(m.spec);
}

MeanSampler model_sampler(const ModelSpec& model) {
  if (const auto* m = std::get_if<LowerBoundModel>(&model)) {
    // the sampler refers to the law, so both live in one shared object
    struct LawSampler {
      explicit LawSampler(JointDistribution d) : law(std::move(d)), sampler(law) {}
      LawSampler(const LawSampler&) = delete;
      JointDistribution law;
      DistributionSampler sampler;
    };
    auto s = std::make_shared<LawSampler>(lower_bound_distribution(m->n, m->t, m->gamma));
    const double n = static_cast<double>(m->n);
    // support {0, 1} and variable 0 most significant, so the sum is a popcount
    return [s, n](Rng& rng) { return static_cast<double>(std::popcount(s->sampler.draw_code(rng))) / n; };
  }
  if (const auto* m = std::get_if<CascadeModel>(&model)) {
    auto g = std::make_shared<Graph>(m->graph);
    const double q = m->q, p = m->p;
    return [g, q, p](Rng& rng) {
      return static_cast<double>(std::popcount(cascade_draw(*g, q, p, rng))) / static_cast<double>(g->n);
    };
  }
  const auto& m = std::get<MarkovModel>(model);
  auto spec = std::make_shared<MarkovSpec>(m.spec);
  auto pi = std::make_shared<std::vector<double>>(stationary_distribution(m.spec.transition));
  return [spec, pi](Rng& rng) {
    const auto path = markov_draw(*spec, *pi, rng);
    double s = 0.0;
    for (auto x : path) s += spec->states[x];
    return s / static_cast<double>(path.size());
  };
}

double model_expected_mean(const ModelSpec& model) {
  if (const auto* m = std::get_if<MarkovModel>(&model)) {
    const auto pi = stationary_distribution(m->spec.transition);
    double mu = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) mu += pi[i] * m->spec.states[i];
    return mu;
  }
  const auto law = model_law(model);
  double s = 0.0;
  for (std::size_t v = 0; v < law->num_vars(); ++v) s += mean(*law, v);
  return s / static_cast<double>(law->num_vars());
}

TailEstimate simulate(const PipelineConfig& config, const TailOptions& options) {
  return estimate_tail(model_sampler(config.model), model_expected_mean(config.model), config.t_grid, config.samples,
                       config.seed, options);
}

// ---------------------------------------------------------------------------

void run_pipeline(const PipelineConfig& config, PipelineResult& res, const TailOptions& options) {
  res = PipelineResult{};
  res.name = config.name;
  res.n = model_size(config.model);

  res.stage = "model";
  const bool interleaved = config.cover_mode == CoverMode::Interleaved;
  if (!interleaved) {
    res.law = model_law(config.model);
    require(res.law.has_value(), ErrorKind::TooLong, "model is too large to enumerate; use an interleaved cover");
  }

  res.stage = "cover";
  std::optional<FractionalCoverResult> fractional;
  if (interleaved) {
    const auto& m = std::get<MarkovModel>(config.model);
    // every block is a stationary chain of length mu with transition P^nu
    const MarkovSpec block_spec{m.spec.states, transition_power(m.spec.transition, m.nu), m.mu};
    const auto block_law = markov_process(block_spec);
    const double a = alpha_separation(block_law, IndexSet::range(m.mu), SeparationMode::ExactDp).value;
    const double g = config.gamma.value_or(a);
    require(a <= g + kCertifyTolerance, ErrorKind::DomainViolation,
            "interleaved blocks have alpha-separation " + std::to_string(a) + " above gamma");
    res.cover.blocks = interleaved_blocks(res.n, m.mu, m.nu);
    res.cover.weights.assign(res.cover.blocks.size(), 1.0);
    res.cover.gamma = g;
    res.cover.certified_alphas = std::vector<double>(res.cover.blocks.size(), a);
    res.cover.certified = true;
    res.notes.push_back("blocks certified on the exact law of one interleaved block");
  } else if (config.cover_mode == CoverMode::Fractional) {
    fractional = fractional_soft_cover(*res.law, *config.gamma);
    res.cover = fractional->cover;
  } else if (config.cover_mode == CoverMode::Greedy) {
    res.cover = min_soft_cover_greedy(*res.law, *config.gamma);
  } else {
    res.cover = min_soft_cover_exact(*res.law, *config.gamma);
  }
  require(res.cover.certified, ErrorKind::BlocksDoNotCover, "cover could not be certified");
  res.chi = res.cover.size();

  res.stage = "bounds";
  const double gamma = res.cover.gamma;
  const auto ranges = ranges_of(config.model, res.law);
  const std::size_t n = res.n;
  auto evaluate = [&](const std::string& kind, double t) -> BoundResult {
    auto with_lambda = [&](const std::function<BoundResult(double)>& f) {
      if (!config.optimize_lambda) return f(t / 2.0);
      return optimize_lambda(f, t).best;
    };
    if (kind == "soft") {
      require(config.cover_mode != CoverMode::Fractional, ErrorKind::DomainViolation,
              "the soft bound needs an integral cover; use the fractional bound");
      return with_lambda([&](double l) { return soft_cover_bound(n, t, l, gamma, res.chi, ranges); });
    }
    if (kind == "fractional") {
      if (!fractional) fractional = fractional_soft_cover(*res.law, gamma);
      require(fractional->exact, ErrorKind::DomainViolation, "fractional cover could not be made exact");
      const double chi_star = fractional->chi_star;
      return with_lambda([&](double l) {
        return fractional_soft_cover_bound(n, t, l, gamma, chi_star, FractionalForm::Tight, ranges);
      });
    }
    if (kind == "hoeffding") return hoeffding_bound(n, t);
    if (kind == "janson") return janson_bound(n, t, res.chi, ranges);
    if (kind == "variance") return with_lambda([&](double l) { return variance_bound(n, t, l, gamma, res.chi); });
    const auto* m = std::get_if<MarkovModel>(&config.model);
    require(m != nullptr, ErrorKind::DomainViolation, "bound '" + kind + "' needs a markov model");
    if (kind == "mixing")
      return mixing_bound(n, m->mu, m->nu, t, window_alpha(m->spec, m->window_j, m->nu, m->window_w));
    const std::size_t nu_b = n / (2 * m->mu);
    return bosq_bound(n, m->mu, nu_b, t, window_alpha(m->spec, m->window_j, nu_b, m->window_w));
  };
  for (const auto* list : {&config.bounds, &config.report_only}) {
    for (const auto& kind : *list) {
      std::vector<BoundResult> row;
      for (double t : config.t_grid) row.push_back(scaled(evaluate(kind, t), config.bound_scale));
      res.bound_kinds.push_back(kind);
      res.bounds.push_back(std::move(row));
    }
  }
  if (!config.report_only.empty())
    res.notes.push_back("report-only bounds use a finite-window surrogate or assume independence; not certificates");

  res.stage = "simulate";
  res.expected_mean = model_expected_mean(config.model);
  res.estimate = estimate_tail(model_sampler(config.model), res.expected_mean, config.t_grid, config.samples,
                               config.seed, options);

  res.stage = "compare";
  for (std::size_t i = 0; i < res.bound_kinds.size(); ++i) {
    auto rep = compare_bounds(*res.estimate, res.bounds[i]);
    auto& into = i < config.bounds.size() ? res.report : res.report_only;
    into.ok += rep.ok;
    into.violations += rep.violations;
    for (auto& r : rep.rows) into.rows.push_back(std::move(r));
  }
  res.stage = "done";
}

PipelineResult run_pipeline(const PipelineConfig& config, const TailOptions& options) {
  PipelineResult r;
  run_pipeline(config, r, options);
  return r;
}

OrderedJson summary_json(const PipelineResult& r) {
  OrderedJson doc;
  doc["name"] = r.name;
  doc["stage"] = r.stage;
  doc["status"] = r.stage != "done" ? "incomplete" : (r.report.violations == 0 ? "OK" : "VIOLATION");
  doc["n"] = r.n;
  if (r.stage != "model" && r.stage != "cover") {
    doc["cover"] = to_json(r.cover);
    doc["chi"] = r.chi;
  }
  OrderedJson bounds = OrderedJson::object();
  for (std::size_t i = 0; i < r.bound_kinds.size(); ++i) {
    OrderedJson list = OrderedJson::array();
    for (const auto& b : r.bounds[i]) list.push_back(to_json(b));
    bounds[r.bound_kinds[i]] = std::move(list);
  }
  doc["bounds"] = std::move(bounds);
  if (r.estimate) {
    doc["expected_mean"] = r.expected_mean;
    doc["estimate"] = to_json(*r.estimate);
  }
  if (r.stage == "done") {
    doc["report"] = to_json(r.report);
    doc["report_only"] = to_json(r.report_only);
  }
  doc["notes"] = r.notes;
  return doc;
}

}  // namespace depbound
