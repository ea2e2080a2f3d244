#pragma once

#include <string>

#include "depbound/bounds.hpp"
#include "depbound/covers.hpp"
#include "depbound/dist.hpp"
#include "depbound/generators.hpp"
#include "depbound/mc_harness.hpp"
#include "json.hpp"

namespace depbound {

using Json = nlohmann::json;
/// Output documents keep their keys in insertion order.
using OrderedJson = nlohmann::ordered_json;

/// Parses text; syntax and type errors become ErrorKind::Parse.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"vars":[{"name":..,"support":[..]}],"probs":[{"o":[..],"p":..}],"renormalize":bool}
JointDistribution distribution_from_json(const Json& doc);
OrderedJson to_json(const JointDistribution& dist);
JointDistribution load_distribution(const std::string& path);

// {"k":int,"edges":[[i,j],..],"gamma":real}
DependencyGraph dependency_graph_from_json(const Json& doc);
OrderedJson to_json(const DependencyGraph& graph);

/// Cascade graphs share the layout above; "n" may replace "k", and
/// "kind":"chain" requests the chain recursion.
Graph graph_from_json(const Json& doc);
OrderedJson to_json(const Graph& graph);

// {"gamma":..,"blocks":[[..]],"weights":[..],"alphas":[..]}
SoftCover cover_from_json(const Json& doc);
OrderedJson to_json(const SoftCover& cover);

OrderedJson to_json(const BoundResult& bound);

// {"width","height","beta","coupling_sign","boundary"}
LatticeSpec lattice_from_json(const Json& doc);
OrderedJson to_json(const LatticeSpec& spec);

// {"states":[..],"transition":[[..]],"length":int}
MarkovSpec markov_from_json(const Json& doc);
OrderedJson to_json(const MarkovSpec& spec);

OrderedJson to_json(const TailEstimate& estimate);
OrderedJson to_json(const ComparisonReport& report);
OrderedJson to_json(const ProbeTable& table);

OrderedJson index_set_json(const IndexSet& set);
IndexSet index_set_from_json(const Json& doc);

}  // namespace depbound
