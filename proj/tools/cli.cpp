#include "cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "depbound/alpha.hpp"
#include "depbound/bounds.hpp"
#include "depbound/covers.hpp"
#include "depbound/error.hpp"
#include "depbound/execution.hpp"
#include "depbound/generators.hpp"
#include "depbound/io.hpp"
#include "depbound/mc_harness.hpp"
#include "depbound/pipeline.hpp"

namespace depbound::cli {

namespace {

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Parse: return kExitParse;
    case ErrorCategory::SizeCap: return kExitSizeCap;
    case ErrorCategory::Domain: return kExitDomain;
  }
  return kExitDomain;
}

class Emitter {
 public:
  Emitter(std::ostream& out, std::string path) : out_(out), path_(std::move(path)) {}

  void operator()(const OrderedJson& doc) const {
    if (path_.empty()) {
      out_ << doc.dump(2) << '\n';
    } else {
      write_text_file(path_, doc.dump(2) + "\n");
    }
  }

 private:
  std::ostream& out_;
  std::string path_;
};

IndexSet to_set(const std::vector<std::size_t>& v) { return IndexSet(v); }

SeparationMode separation_mode(const std::string& s) {
  if (s == "exact") return SeparationMode::ExactDp;
  if (s == "brute") return SeparationMode::BruteForce;
  if (s == "greedy") return SeparationMode::Greedy;
  throw Error(ErrorKind::Parse, "unknown separation mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// bound

struct BoundFlags {
  std::vector<std::string> kinds;
  std::vector<double> t_grid;
  std::optional<double> n, t, lambda, gamma, chi, mu, nu, alpha, B, L, poly, decay, C, c, d;
  std::string p;
  double range = 1.0;
  std::string form = "tight";
  bool optimize = false;
};

double need(const std::optional<double>& v, const char* flag) {
  require(v.has_value(), ErrorKind::Parse, std::string("missing --") + flag);
  return *v;
}

std::size_t need_count(const std::optional<double>& v, const char* flag) {
  const double x = need(v, flag);
  require(x >= 0.0 && std::floor(x) == x, ErrorKind::DomainViolation, std::string("--") + flag + " must be a whole number");
  return static_cast<std::size_t>(x);
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    require(used == s.size(), ErrorKind::Parse, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "bad number '" + s + "'");
  }
}

OrderedJson evaluate_bound(const BoundFlags& f, const std::string& kind, double t, bool multi) {
  const auto ranges = [&](std::size_t n) {
    RangeSpec r;
    r.bounds.assign(n, {0.0, f.range});
    return r;
  };
  auto lambda_bound = [&](const std::function<BoundResult(double)>& eval) -> OrderedJson {
    if (f.optimize) {
      const auto opt = optimize_lambda(eval, t);
      OrderedJson doc;
      doc["lambda_star"] = opt.lambda_star;
      doc["best"] = to_json(opt.best);
      doc["at_half"] = to_json(opt.at_half);
      return doc;
    }
    return to_json(eval(f.lambda.value_or(t / 2.0)));
  };

  if (kind == "hoeffding") return to_json(hoeffding_bound(need_count(f.n, "n"), t));
  if (kind == "janson") {
    const auto n = need_count(f.n, "n");
    return to_json(janson_bound(n, t, need(f.chi, "chi"), ranges(n)));
  }
  if (kind == "soft") {
    const auto n = need_count(f.n, "n");
    const double gamma = need(f.gamma, "gamma"), chi = need(f.chi, "chi");
    return lambda_bound([&](double l) { return soft_cover_bound(n, t, l, gamma, chi, ranges(n)); });
  }
  if (kind == "fractional") {
    const auto n = need_count(f.n, "n");
    const double gamma = need(f.gamma, "gamma"), chi = need(f.chi, "chi");
    require(f.form == "tight" || f.form == "loose", ErrorKind::Parse, "--form must be tight or loose");
    const auto form = f.form == "tight" ? FractionalForm::Tight : FractionalForm::Loose;
    return lambda_bound(
        [&](double l) { return fractional_soft_cover_bound(n, t, l, gamma, chi, form, ranges(n)); });
  }
  if (kind == "variance") {
    const auto n = need_count(f.n, "n");
    const double gamma = need(f.gamma, "gamma"), chi = need(f.chi, "chi");
    return lambda_bound([&](double l) { return variance_bound(n, t, l, gamma, chi); });
  }
  if (kind == "lower") {
    require(t >= 0.0 && std::floor(t) == t, ErrorKind::DomainViolation,
            "the lower bound takes a whole-number deviation t of the sum");
    return to_json(lower_bound_tail(need_count(f.n, "n"), static_cast<std::size_t>(t), need(f.alpha, "alpha")));
  }
  if (kind == "lp") {
    require(!f.p.empty(), ErrorKind::Parse, "missing --p");
    const double p = parse_p(f.p);
    OrderedJson doc;
    doc["kind"] = "lp";
    doc["value"] = lp_distance_bound(p, need(f.alpha, "alpha"), f.range);
    doc["params"] = {{"p", f.p}, {"alpha_sep", *f.alpha}, {"range", f.range}};
    return doc;
  }
  if (kind == "lipschitz")
    return to_json(lipschitz_sup_bound(need_count(f.n, "n"), t, need(f.gamma, "gamma"), need(f.chi, "chi"),
                                       need(f.B, "B"), need(f.L, "L"), f.range));
  if (kind == "mixing")
    return to_json(mixing_bound(need_count(f.n, "n"), need_count(f.mu, "mu"), need_count(f.nu, "nu"), t,
                                need(f.alpha, "alpha")));
  if (kind == "bosq") {
    const auto n = need_count(f.n, "n"), mu = need_count(f.mu, "mu");
    // in a comparison with the mixing bound, --nu belongs to the latter
    const std::size_t nu = (multi || !f.nu) && mu > 0 ? n / (2 * mu) : need_count(f.nu, "nu");
    return to_json(bosq_bound(n, mu, nu, t, need(f.alpha, "alpha")));
  }
  if (kind == "lattice")
    return to_json(lattice_bound(need_count(f.n, "n"), t, need(f.chi, "chi"), need(f.poly, "poly"),
                                 need(f.decay, "decay"), need(f.nu, "nu")));
  if (kind == "cascade") {
    require(!f.p.empty(), ErrorKind::Parse, "missing --p");
    return to_json(cascade_bound(need_count(f.n, "n"), t, need(f.chi, "chi"), need(f.C, "C"), need(f.c, "c"),
                                 parse_p(f.p), need(f.d, "d")));
  }
  throw Error(ErrorKind::Parse, "unknown bound kind '" + kind + "'");
}

OrderedJson cmd_bound(const BoundFlags& f) {
  require(!f.kinds.empty(), ErrorKind::Parse, "missing --kind");
  std::vector<double> grid = f.t_grid;
  if (grid.empty()) {
    const bool t_free = f.kinds.size() == 1 && f.kinds[0] == "lp";
    if (t_free) return evaluate_bound(f, "lp", 0.0, false);
    grid.push_back(need(f.t, "t"));
  }
  const bool multi = f.kinds.size() > 1;
  if (!multi && f.t_grid.empty()) return evaluate_bound(f, f.kinds[0], grid[0], false);
  OrderedJson rows = OrderedJson::array();
  for (double t : grid) {
    OrderedJson row;
    row["t"] = t;
    for (const auto& k : f.kinds) row[k] = evaluate_bound(f, k, t, multi);
    rows.push_back(std::move(row));
  }
  return OrderedJson{{"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// probe

struct ProbeFlags {
  std::string config;
  std::vector<std::size_t> chains, stars;
  double q = 0.5;
  std::vector<double> p_grid;
  std::vector<std::string> sets;
  std::vector<std::size_t> set_sizes{2, 3};
};

std::vector<IndexSet> all_subsets(std::size_t n, const std::vector<std::size_t>& sizes) {
  std::vector<IndexSet> out;
  require(n <= 20, ErrorKind::GraphTooLarge, "too many vertices to list subsets");
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const auto c = static_cast<std::size_t>(std::popcount(m));
    if (std::find(sizes.begin(), sizes.end(), c) != sizes.end()) out.push_back(IndexSet::from_mask(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

IndexSet parse_set(const std::string& s) {
  std::vector<std::size_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty() && item.find_first_not_of("0123456789") == std::string::npos, ErrorKind::Parse,
            "bad index '" + item + "' in set '" + s + "'");
    v.push_back(std::stoul(item));
  }
  return IndexSet(std::move(v));
}

OrderedJson cmd_probe(const ProbeFlags& f) {
  std::vector<Graph> graphs;
  double q = f.q;
  std::vector<double> p_grid = f.p_grid;
  std::vector<IndexSet> sets;
  for (const auto& s : f.sets) sets.push_back(parse_set(s));
  if (!f.config.empty()) {
    const auto doc = read_json_file(f.config);
    try {
      for (const auto& g : doc.at("graphs")) graphs.push_back(graph_from_json(g));
      if (doc.contains("q")) q = doc.at("q").get<double>();
      if (doc.contains("p_grid")) p_grid = doc.at("p_grid").get<std::vector<double>>();
      if (doc.contains("sets"))
        for (const auto& s : doc.at("sets")) sets.push_back(index_set_from_json(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("probe config: ") + e.what());
    }
  }
  for (auto n : f.chains) graphs.push_back(Graph::chain(n));
  for (auto l : f.stars) graphs.push_back(Graph::star(l));
  require(!graphs.empty(), ErrorKind::Parse, "no graphs given");
  require(!p_grid.empty(), ErrorKind::EmptyGrid, "no edge probabilities given");
  if (sets.empty()) {
    std::size_t largest = 0;
    for (const auto& g : graphs) largest = std::max(largest, g.n);
    sets = all_subsets(largest, f.set_sizes);
  }
  const auto table = conjecture_probe(graphs, q, p_grid, sets);
  auto doc = to_json(table);
  doc["graphs"] = OrderedJson::array();
  for (const auto& g : graphs) doc["graphs"].push_back(to_json(g));
  doc["note"] = "exploratory fit; no verdict";
  return doc;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(PipelineConfig config, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  const auto csv = dir / (config.csv_path.empty() ? config.name + ".csv" : config.csv_path);
  const auto summary = dir / (config.summary_path.empty() ? config.name + ".summary.json" : config.summary_path);

  PipelineResult result;
  int code = kExitOk;
  std::string failure;
  try {
    run_pipeline(config, result);
  } catch (const Error& e) {
    code = exit_code(e);
    failure = e.what();
  }
  auto doc = summary_json(result);
  doc["config"] = to_json(config);
  if (!failure.empty()) doc["error"] = failure;
  write_text_file(summary.string(), doc.dump(2) + "\n");
  if (result.stage == "done") {
    ComparisonReport all = result.report;
    for (auto r : result.report_only.rows) {
      r.bound_kind += "/report-only";
      all.rows.push_back(std::move(r));
    }
    std::ofstream f(csv);
    require(static_cast<bool>(f), ErrorKind::Parse, "cannot write '" + csv.string() + "'");
    write_csv(all, f);
  }
  if (!failure.empty()) {
    err << "error in stage '" << result.stage << "': " << failure << '\n';
    return code;
  }
  out << config.name << ": " << result.report.ok << " OK, " << result.report.violations << " VIOLATION";
  if (!result.report_only.rows.empty())
    out << " (report-only: " << result.report_only.ok << " OK, " << result.report_only.violations << " VIOLATION)";
  out << "\nwrote " << csv.string() << " and " << summary.string() << '\n';
  return result.report.violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact dependence measures, soft covers and tail bounds", "depbound"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_path;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides a config's seed)");
  app.add_option("--threads", threads, "Worker threads, 0 for the default")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "Output file; for verify, the output directory");

  // alpha
  auto* alpha = app.add_subcommand("alpha", "alpha-dependence or alpha-separation of a distribution file");
  std::string alpha_dist, alpha_mode = "exact";
  std::vector<std::size_t> left, right, separation;
  std::uint64_t event_cap = std::uint64_t{1} << 16;
  alpha->add_option("dist,--dist", alpha_dist, "Distribution JSON")->required();
  alpha->add_option("--left", left, "Left variable group")->delimiter(',');
  alpha->add_option("--right", right, "Right variable group")->delimiter(',');
  alpha->add_option("--separation", separation, "Variables whose alpha-separation is wanted")->delimiter(',');
  alpha->add_option("--mode", alpha_mode, "exact, brute or greedy")->check(CLI::IsMember({"exact", "brute", "greedy"}));
  alpha->add_option("--event-cap", event_cap, "Largest admissible event count");

  // cover
  auto* cover = app.add_subcommand("cover", "soft cover of a distribution file");
  std::string cover_dist, cover_mode = "exact";
  double cover_gamma = 0.0;
  std::string lattice;
  std::size_t lattice_nu = 0;
  auto* dist_opt = cover->add_option("dist,--dist", cover_dist, "Distribution JSON");
  auto* gamma_opt = cover->add_option("--gamma", cover_gamma, "Independence threshold");
  auto* lattice_opt = cover->add_option("--lattice", lattice, "WIDTHxHEIGHT: partition lattice sites instead");
  cover->add_option("--nu", lattice_nu, "Smallest in-group l1 distance for --lattice");
  lattice_opt->excludes(dist_opt)->excludes(gamma_opt);
  cover->add_option("--mode", cover_mode, "exact, greedy or fractional")
      ->check(CLI::IsMember({"exact", "greedy", "fractional"}));

  // bound
  auto* bound = app.add_subcommand("bound", "evaluate a tail bound");
  BoundFlags bf;
  bound->add_option("--kind", bf.kinds, "Bound kind(s), comma separated")->delimiter(',')->required();
  bound->add_option("-n", bf.n, "Number of variables");
  bound->add_option("-t", bf.t, "Deviation of the mean (sum for --kind lower)");
  bound->add_option("--t-grid", bf.t_grid, "Several deviations, comma separated")->delimiter(',');
  bound->add_option("--lambda", bf.lambda, "Split parameter, default t/2");
  bound->add_flag("--optimize-lambda", bf.optimize, "Minimize over lambda");
  bound->add_option("--gamma", bf.gamma);
  bound->add_option("--chi", bf.chi, "Cover size or fractional cover weight");
  bound->add_option("--mu", bf.mu);
  bound->add_option("--nu", bf.nu);
  bound->add_option("--alpha", bf.alpha, "alpha-separation or mixing coefficient");
  bound->add_option("--p", bf.p, "Norm exponent (lp, may be inf) or edge probability (cascade)");
  bound->add_option("--range", bf.range, "Common variable range");
  bound->add_option("--B", bf.B);
  bound->add_option("--L", bf.L);
  bound->add_option("--poly", bf.poly, "Polynomial prefactor of the lattice bound");
  bound->add_option("--decay", bf.decay, "Decay rate of the lattice bound");
  bound->add_option("--C", bf.C);
  bound->add_option("--c", bf.c);
  bound->add_option("--d", bf.d, "Set distance");
  bound->add_option("--form", bf.form, "tight or loose (fractional)");

  // simulate / verify
  auto* simulate_cmd = app.add_subcommand("simulate", "tail estimate of a pipeline's model");
  std::string sim_config;
  std::optional<std::size_t> sim_samples;
  simulate_cmd->add_option("config,--config", sim_config, "Pipeline config JSON")->required();
  simulate_cmd->add_option("--samples", sim_samples, "Override the sample count");

  auto* verify = app.add_subcommand("verify", "run a pipeline: model, cover, bounds, simulation, comparison");
  std::string verify_config;
  verify->add_option("config,--config", verify_config, "Pipeline config JSON")->required();

  // probe
  auto* probe = app.add_subcommand("probe", "exact alpha-separation on cascade graphs with a decay fit");
  ProbeFlags pf;
  probe->add_option("--config", pf.config, "JSON with graphs, q, p_grid and sets");
  probe->add_option("--chain", pf.chains, "Chain lengths")->delimiter(',');
  probe->add_option("--star", pf.stars, "Star leaf counts")->delimiter(',');
  probe->add_option("--q", pf.q, "Initial firing probability");
  probe->add_option("--p", pf.p_grid, "Edge probabilities")->delimiter(',');
  probe->add_option("--set", pf.sets, "Index set such as 0,2 (repeatable)");
  probe->add_option("--set-sizes", pf.set_sizes, "Sizes of the default sets")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  const Emitter emit(out, out_path);
  try {
    if (threads > 0) set_threads(threads);

    if (alpha->parsed()) {
      const auto dist = load_distribution(alpha_dist);
      AlphaOptions opts;
      opts.event_cap = event_cap;
      OrderedJson doc;
      if (!separation.empty()) {
        require(left.empty() && right.empty(), ErrorKind::Parse, "--separation excludes --left/--right");
        const auto r = alpha_separation(dist, to_set(separation), separation_mode(alpha_mode), opts);
        doc["vars"] = separation;
        doc["mode"] = alpha_mode;
        doc["alpha_seq"] = r.value;
        doc["ordering"] = r.ordering.perm;
        doc["terms"] = r.terms;
      } else {
        require(!left.empty() && !right.empty(), ErrorKind::Parse, "give --left and --right, or --separation");
        const double a = alpha_mode == "brute" ? alpha_dependence_bruteforce(dist, to_set(left), to_set(right))
                                               : alpha_dependence(dist, to_set(left), to_set(right), opts);
        doc["left"] = left;
        doc["right"] = right;
        doc["alpha"] = a;
      }
      emit(doc);
      return kExitOk;
    }

    if (cover->parsed() && !lattice.empty()) {
      const auto x = lattice.find('x');
      require(x != std::string::npos, ErrorKind::Parse, "--lattice takes WIDTHxHEIGHT");
      std::size_t w = 0, h = 0;
      try {
        w = std::stoul(lattice.substr(0, x));
        h = std::stoul(lattice.substr(x + 1));
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, "bad lattice size '" + lattice + "'");
      }
      require(lattice_nu >= 1, ErrorKind::DomainViolation, "--nu must be at least 1");
      const auto groups = distance_partition(w, h, lattice_nu);
      OrderedJson doc;
      doc["width"] = w;
      doc["height"] = h;
      doc["nu"] = lattice_nu;
      doc["blocks"] = OrderedJson::array();
      for (const auto& g : groups) doc["blocks"].push_back(index_set_json(g));
      doc["size"] = groups.size();
      doc["min_in_group_distance"] = min_in_group_distance(w, groups);
      emit(doc);
      return kExitOk;
    }

    if (cover->parsed()) {
      require(!cover_dist.empty(), ErrorKind::Parse, "cover needs a distribution file or --lattice");
      require(gamma_opt->count() > 0, ErrorKind::Parse, "cover needs --gamma");
      const auto dist = load_distribution(cover_dist);
      OrderedJson doc;
      if (cover_mode == "fractional") {
        const auto r = fractional_soft_cover(dist, cover_gamma);
        doc = to_json(r.cover);
        doc["chi_star"] = r.chi_star;
        doc["dual_objective"] = r.dual_objective;
        doc["exact"] = r.exact;
      } else {
        const auto c =
            cover_mode == "greedy" ? min_soft_cover_greedy(dist, cover_gamma) : min_soft_cover_exact(dist, cover_gamma);
        doc = to_json(c);
        doc["chi"] = c.size();
      }
      doc["mode"] = cover_mode;
      emit(doc);
      return kExitOk;
    }

    if (bound->parsed()) {
      emit(cmd_bound(bf));
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      auto config = load_pipeline_config(sim_config);
      if (seed_opt->count() > 0) config.seed = seed;
      if (sim_samples) config.samples = *sim_samples;
      const auto est = simulate(config);
      auto doc = to_json(est);
      doc["name"] = config.name;
      emit(doc);
      return kExitOk;
    }

    if (verify->parsed()) {
      auto config = load_pipeline_config(verify_config);
      if (seed_opt->count() > 0) config.seed = seed;
      return cmd_verify(std::move(config), out_path, out, err);
    }

    if (probe->parsed()) {
      emit(cmd_probe(pf));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitParse;
}

}  // namespace depbound::cli
