#include "depbound/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "depbound/error.hpp"

namespace depbound {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& doc, const char* key) {
  require(doc.is_object(), ErrorKind::Parse, std::string("expected an object holding '") + key + "'");
  const auto it = doc.find(key);
  require(it != doc.end(), ErrorKind::Parse, std::string("missing field '") + key + "'");
  return *it;
}

std::size_t index_value(const Json& v) {
  require(v.is_number_integer() && v.get<long long>() >= 0, ErrorKind::Parse,
          "expected a non-negative integer, got " + v.dump());
  return v.get<std::size_t>();
}

double real_value(const Json& v) {
  require(v.is_number(), ErrorKind::Parse, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::vector<double> real_list(const Json& v) {
  require(v.is_array(), ErrorKind::Parse, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(real_value(x));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_list(const Json& v) {
  require(v.is_array(), ErrorKind::Parse, "edges must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : v) {
    require(e.is_array() && e.size() == 2, ErrorKind::Parse, "an edge is a pair [i, j]");
    edges.emplace_back(index_value(e[0]), index_value(e[1]));
  }
  return edges;
}

OrderedJson named_values(const std::vector<std::pair<std::string, double>>& values) {
  OrderedJson out = OrderedJson::object();
  for (const auto& [k, v] : values) out[k] = v;
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Parse, "cannot write '" + path + "'");
  out << text;
}

IndexSet index_set_from_json(const Json& doc) {
  require(doc.is_array(), ErrorKind::Parse, "an index set is an array of integers");
  std::vector<std::size_t> v;
  for (const auto& x : doc) v.push_back(index_value(x));
  return IndexSet(std::move(v));
}

OrderedJson index_set_json(const IndexSet& set) { return OrderedJson(set.values()); }

// ---------------------------------------------------------------------------

JointDistribution distribution_from_json(const Json& doc) {
  return guarded("distribution", [&] {
    std::vector<VariableSpec> vars;
    const auto& jv = field(doc, "vars");
    require(jv.is_array(), ErrorKind::Parse, "'vars' must be an array");
    for (const auto& v : jv) {
      const auto& name = field(v, "name");
      require(name.is_string(), ErrorKind::Parse, "variable name must be a string");
      vars.push_back({name.get<std::string>(), real_list(field(v, "support"))});
    }
    const auto& jp = field(doc, "probs");
    require(jp.is_array(), ErrorKind::Parse, "'probs' must be an array");
    std::vector<std::pair<Outcome, double>> entries;
    entries.reserve(jp.size());
    for (const auto& e : jp) {
      const auto& o = field(e, "o");
      require(o.is_array(), ErrorKind::Parse, "'o' must be an array of support positions");
      Outcome out;
      for (const auto& x : o) {
        const auto i = index_value(x);
        require(i <= 0xffffffffULL, ErrorKind::Parse, "support position too large");
        out.push_back(static_cast<std::uint32_t>(i));
      }
      entries.emplace_back(std::move(out), real_value(field(e, "p")));
    }
    BuildOptions opts;
    if (const auto it = doc.find("renormalize"); it != doc.end()) {
      require(it->is_boolean(), ErrorKind::Parse, "'renormalize' must be a boolean");
      opts.renormalize = it->get<bool>();
    }
    return build_distribution(std::move(vars), entries, opts);
  });
}

OrderedJson to_json(const JointDistribution& dist) {
  OrderedJson doc;
  doc["vars"] = OrderedJson::array();
  for (const auto& v : dist.vars()) doc["vars"].push_back({{"name", v.name}, {"support", v.support}});
  doc["probs"] = OrderedJson::array();
  for (const auto& e : dist.entries()) doc["probs"].push_back({{"o", dist.decode(e.code)}, {"p", e.p}});
  return doc;
}

JointDistribution load_distribution(const std::string& path) { return distribution_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------

DependencyGraph dependency_graph_from_json(const Json& doc) {
  return guarded("graph", [&] {
    DependencyGraph g;
    g.k = index_value(field(doc, "k"));
    for (auto [i, j] : edge_list(field(doc, "edges"))) {
      require(i != j, ErrorKind::Parse, "self loop in graph");
      require(i < g.k && j < g.k, ErrorKind::IndexOutOfRange, "edge endpoint outside [0, k)");
      g.edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    if (const auto it = doc.find("gamma"); it != doc.end()) g.gamma = real_value(*it);
    return g;
  });
}

OrderedJson to_json(const DependencyGraph& graph) {
  OrderedJson doc;
  doc["k"] = graph.k;
  doc["edges"] = OrderedJson::array();
  for (auto [i, j] : graph.edges) doc["edges"].push_back({i, j});
  doc["gamma"] = graph.gamma;
  return doc;
}

Graph graph_from_json(const Json& doc) {
  return guarded("graph", [&] {
    const bool has_n = doc.is_object() && doc.contains("n");
    const std::size_t n = index_value(field(doc, has_n ? "n" : "k"));
    GraphKind kind = GraphKind::General;
    if (const auto it = doc.find("kind"); it != doc.end()) {
      require(it->is_string(), ErrorKind::Parse, "'kind' must be a string");
      const auto s = it->get<std::string>();
      require(s == "chain" || s == "general", ErrorKind::Parse, "graph kind must be 'chain' or 'general'");
      kind = s == "chain" ? GraphKind::Chain : GraphKind::General;
    }
    if (kind == GraphKind::Chain && !doc.contains("edges")) return Graph::chain(n);
    return Graph::make(n, edge_list(field(doc, "edges")), kind);
  });
}

OrderedJson to_json(const Graph& graph) {
  OrderedJson doc;
  doc["k"] = graph.n;
  doc["edges"] = OrderedJson::array();
  for (auto [i, j] : graph.edges) doc["edges"].push_back({i, j});
  doc["kind"] = graph.kind == GraphKind::Chain ? "chain" : "general";
  return doc;
}

// ---------------------------------------------------------------------------

SoftCover cover_from_json(const Json& doc) {
  return guarded("cover", [&] {
    SoftCover c;
    c.gamma = real_value(field(doc, "gamma"));
    const auto& jb = field(doc, "blocks");
    require(jb.is_array(), ErrorKind::Parse, "'blocks' must be an array");
    for (const auto& b : jb) c.blocks.push_back(index_set_from_json(b));
    if (const auto it = doc.find("weights"); it != doc.end()) c.weights = real_list(*it);
    require(c.weights.empty() || c.weights.size() == c.blocks.size(), ErrorKind::Parse,
            "one weight per block expected");
    if (const auto it = doc.find("alphas"); it != doc.end() && !it->is_null()) {
      auto alphas = real_list(*it);
      require(alphas.size() == c.blocks.size(), ErrorKind::Parse, "one alpha per block expected");
      c.certified_alphas = std::move(alphas);
    }
    return c;
  });
}

OrderedJson to_json(const SoftCover& cover) {
  OrderedJson doc;
  doc["gamma"] = cover.gamma;
  doc["blocks"] = OrderedJson::array();
  for (const auto& b : cover.blocks) doc["blocks"].push_back(index_set_json(b));
  doc["weights"] = cover.weights;
  doc["alphas"] = cover.certified_alphas ? OrderedJson(*cover.certified_alphas) : OrderedJson(nullptr);
  doc["certified"] = cover.certified;
  doc["size"] = cover.size();
  return doc;
}

OrderedJson to_json(const BoundResult& bound) {
  OrderedJson doc;
  doc["kind"] = bound.kind;
  doc["value"] = bound.value;
  doc["clipped"] = bound.clipped;
  OrderedJson terms = OrderedJson::object();
  for (const auto& t : bound.terms) terms[t.name] = t.value;
  doc["terms"] = std::move(terms);
  doc["params"] = named_values(bound.params);
  if (!bound.extras.empty()) doc["extras"] = named_values(bound.extras);
  if (bound.conditional) doc["conditional"] = true;
  if (!bound.note.empty()) doc["note"] = bound.note;
  return doc;
}

// ---------------------------------------------------------------------------

LatticeSpec lattice_from_json(const Json& doc) {
  return guarded("lattice", [&] {
    LatticeSpec s;
    s.width = index_value(field(doc, "width"));
    s.height = index_value(field(doc, "height"));
    s.beta = real_value(field(doc, "beta"));
    if (const auto it = doc.find("coupling_sign"); it != doc.end()) s.coupling_sign = it->get<int>();
    if (const auto it = doc.find("boundary"); it != doc.end() && !it->is_null()) s.boundary = it->get<int>();
    return s;
  });
}

OrderedJson to_json(const LatticeSpec& spec) {
  OrderedJson doc;
  doc["width"] = spec.width;
  doc["height"] = spec.height;
  doc["beta"] = spec.beta;
  doc["coupling_sign"] = spec.coupling_sign;
  doc["boundary"] = spec.boundary ? OrderedJson(*spec.boundary) : OrderedJson(nullptr);
  return doc;
}

MarkovSpec markov_from_json(const Json& doc) {
  return guarded("markov", [&] {
    MarkovSpec s;
    s.states = real_list(field(doc, "states"));
    const auto& jt = field(doc, "transition");
    require(jt.is_array(), ErrorKind::Parse, "'transition' must be an array of rows");
    for (const auto& row : jt) s.transition.push_back(real_list(row));
    s.length = index_value(field(doc, "length"));
    return s;
  });
}

OrderedJson to_json(const MarkovSpec& spec) {
  OrderedJson doc;
  doc["states"] = spec.states;
  doc["transition"] = spec.transition;
  doc["length"] = spec.length;
  return doc;
}

// ---------------------------------------------------------------------------

OrderedJson to_json(const TailEstimate& e) {
  OrderedJson doc;
  doc["t_grid"] = e.t_grid;
  doc["exceedances"] = e.exceedances;
  doc["estimates"] = e.estimates;
  doc["ci_low"] = e.ci_low;
  doc["ci_high"] = e.ci_high;
  doc["sample_count"] = e.sample_count;
  doc["seed"] = e.seed;
  doc["expected_mean"] = e.expected_mean;
  doc["level"] = e.level;
  return doc;
}

OrderedJson to_json(const ComparisonReport& report) {
  OrderedJson doc;
  doc["rows"] = OrderedJson::array();
  for (const auto& r : report.rows)
    doc["rows"].push_back({{"t", r.t},
                           {"estimate", r.estimate},
                           {"ci_low", r.ci_low},
                           {"ci_high", r.ci_high},
                           {"bound_value", r.bound_value},
                           {"bound_kind", r.bound_kind},
                           {"verdict", to_string(r.verdict)}});
  doc["ok"] = report.ok;
  doc["violations"] = report.violations;
  return doc;
}

OrderedJson to_json(const ProbeTable& table) {
  OrderedJson doc;
  doc["rows"] = OrderedJson::array();
  for (const auto& r : table.rows) {
    OrderedJson row{{"graph", r.graph}, {"p", r.p}, {"set", index_set_json(r.set)}, {"d", r.d},
                    {"alpha_seq", r.alpha_seq}};
    if (r.lemma_applies) {
      row["lemma_bound"] = r.lemma_bound;
      row["lemma_ok"] = r.lemma_ok;
    }
    doc["rows"].push_back(std::move(row));
  }
  doc["fit"] = {{"C", table.fit_C}, {"c", table.fit_c}, {"envelope_C", table.envelope_C},
                {"fitted_rows", table.fitted_rows}};
  doc["lemma_violations"] = table.lemma_violations;
  return doc;
}

}  // namespace depbound
