#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "depbound/generators.hpp"
#include "depbound/io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace depbound;

namespace {

const std::string kSource = DEPBOUND_SOURCE_DIR;

struct Run {
  int code = -1;
  std::string out;
  std::string err;

  Json json() const { return parse_json(out); }
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return kSource + "/fixtures/" + name + ".json"; }
std::string config(const std::string& name) { return kSource + "/configs/" + name + ".json"; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("depbound_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("alpha command") {
  auto r = invoke({"alpha", fixture("correlated_bits"), "--left", "0", "--right", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["alpha"].get<double>() == doctest::Approx(0.25).epsilon(1e-14));
  r = invoke({"alpha", "--dist", fixture("correlated_bits"), "--left", "0", "--right", "1", "--mode", "brute"});
  CHECK(r.json()["alpha"].get<double>() == doctest::Approx(0.25).epsilon(1e-14));

  r = invoke({"alpha", fixture("lower_bound_n4"), "--separation", "0,1,2,3"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(r.json()["alpha_seq"].get<double>() - 0.0625) < 1e-12);
  CHECK(r.json()["ordering"].size() == 4);

  const auto dir = scratch("alpha");
  std::ofstream(dir / "bad.json") << "{\"vars\": [";
  r = invoke({"alpha", (dir / "bad.json").string(), "--left", "0", "--right", "1"});
  CHECK(r.code == cli::kExitParse);
  CHECK(r.err.find("malformed JSON") != std::string::npos);

  r = invoke({"alpha", fixture("correlated_bits"), "--left", "0", "--right", "1", "--event-cap", "2"});
  CHECK(r.code == cli::kExitSizeCap);
  r = invoke({"alpha", fixture("correlated_bits"), "--left", "0"});
  CHECK(r.code == cli::kExitParse);
  r = invoke({"alpha", fixture("correlated_bits"), "--left", "0", "--right", "5"});
  CHECK(r.code == cli::kExitDomain);
}

TEST_CASE("cover command") {
  auto r = invoke({"cover", fixture("independent_bits"), "--gamma", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["chi"] == 1.0);
  CHECK(r.json()["blocks"].size() == 1);

  r = invoke({"cover", fixture("lower_bound_n4"), "--gamma", "0", "--mode", "exact"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["chi"] == 2.0);
  CHECK(r.json()["certified"] == true);

  r = invoke({"cover", fixture("c5_edge_shared"), "--gamma", "0", "--mode", "fractional"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["chi_star"].get<double>() == doctest::Approx(2.5).epsilon(1e-9));

  const auto dir = scratch("cover");
  std::ofstream(dir / "bits13.json") << to_json(testing::independent_fair_bits(13)).dump();
  r = invoke({"cover", (dir / "bits13.json").string(), "--gamma", "0"});
  CHECK(r.code == cli::kExitSizeCap);
  r = invoke({"cover", fixture("c5_edge_shared")});
  CHECK(r.code == cli::kExitParse);

  r = invoke({"--out", (dir / "cover.json").string(), "cover", fixture("lower_bound_n4"), "--gamma", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(read_json_file((dir / "cover.json").string())["chi"] == 2.0);
}

TEST_CASE("chain cover and lattice partition through the command line") {
  // threshold between the gap-2 and gap-3 dependences of the five-step chain
  const auto d = load_distribution(fixture("markov_chain5"));
  const double gamma = (window_alpha(d, 1, 2, 1) + window_alpha(d, 1, 3, 1)) / 2.0;
  auto r = invoke({"cover", fixture("markov_chain5"), "--gamma", std::to_string(gamma), "--mode", "greedy"});
  REQUIRE(r.code == 0);
  const auto doc = r.json();
  CHECK(doc["certified"] == true);
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& b : doc["blocks"]) blocks.push_back(b.get<std::vector<std::size_t>>());
  CHECK(blocks == std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2}});

  r = invoke({"cover", "--lattice", "5x5", "--nu", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["size"] == 5);
  CHECK(r.json()["min_in_group_distance"].get<std::size_t>() >= 3);
  CHECK(invoke({"cover", "--lattice", "5by5", "--nu", "3"}).code == cli::kExitParse);
}

TEST_CASE("bound command") {
  auto r = invoke({"bound", "--kind", "hoeffding", "-n", "100", "-t", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["value"].get<double>() == doctest::Approx(0.135335).epsilon(1e-6));

  r = invoke({"bound", "--kind", "lower", "-n", "7", "-t", "0", "--alpha", "0"});
  CHECK(r.code == cli::kExitDomain);

  r = invoke({"bound", "--kind", "soft", "-n", "100", "-t", "0.2", "--gamma", "1e-4", "--chi", "2", "--optimize-lambda"});
  REQUIRE(r.code == 0);
  const auto opt = r.json();
  const double ls = opt["lambda_star"].get<double>();
  CHECK(ls > 0.0);
  CHECK(ls < 0.2);
  CHECK(opt["best"]["value"].get<double>() <= opt["at_half"]["value"].get<double>());

  r = invoke({"bound", "--kind", "soft", "-n", "100", "-t", "0.2", "--gamma", "0", "--chi", "2"});
  CHECK(std::abs(r.json()["value"].get<double>() - std::exp(-1.0)) < 1e-12);
  CHECK(r.json()["terms"].contains("dependence_term"));

  r = invoke({"bound", "--kind", "lp", "--p", "1", "--alpha", "0.001"});
  CHECK(std::abs(r.json()["value"].get<double>() - 0.036) < 1e-15);

  r = invoke({"bound", "--kind", "mixing,bosq", "-n", "100", "--mu", "50", "--nu", "2", "--alpha", "0", "--t-grid",
           "0.2,0.4"});
  REQUIRE(r.code == 0);
  const auto rows = r.json()["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["bosq"]["value"].get<double>() == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(rows[1]["mixing"]["kind"] == "mixing");

  CHECK(invoke({"bound", "--kind", "soft", "-n", "100", "-t", "0.2"}).code == cli::kExitParse);
  CHECK(invoke({"bound", "--kind", "soft", "-n", "100", "-t", "-0.2", "--gamma", "0", "--chi", "1"}).code ==
        cli::kExitDomain);
  CHECK(invoke({"bound", "--kind", "nosuch", "-t", "0.1"}).code == cli::kExitParse);
  r = invoke({"bound", "--kind", "cascade", "-n", "20", "-t", "0.3", "--chi", "3", "--C", "4", "--c", "4", "--p", "0.05",
           "--d", "2"});
  CHECK(r.json()["conditional"] == true);
}

TEST_CASE("verify command") {
  const auto dir = scratch("verify");
  auto r = invoke({"verify", config("lower_bound_n8"), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("2 OK, 0 VIOLATION") != std::string::npos);
  std::ifstream csv(dir / "lower_bound_n8.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,estimate,ci_low,ci_high,bound_value,bound_kind,verdict");
  const auto summary = read_json_file((dir / "lower_bound_n8.summary.json").string());
  CHECK(summary["status"] == "OK");
  CHECK(summary["chi"] == 2.0);

  r = invoke({"verify", config("lower_bound_n8_forced_violation"), "--out", dir.string()});
  CHECK(r.code == cli::kExitViolation);
  CHECK(read_json_file((dir / "lower_bound_n8_forced_violation.summary.json").string())["status"] == "VIOLATION");

  r = invoke({"verify", config("cascade_chain12"), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("4 OK, 0 VIOLATION") != std::string::npos);

  // a stage failure still writes the partial summary
  auto doc = read_json_file(config("cascade_chain12"));
  doc["name"] = "too_big";
  doc["model"]["graph"]["n"] = 13;
  std::ofstream(dir / "too_big.json") << doc.dump();
  r = invoke({"verify", (dir / "too_big.json").string(), "--out", dir.string()});
  CHECK(r.code == cli::kExitSizeCap);
  const auto partial = read_json_file((dir / "too_big.summary.json").string());
  CHECK(partial["stage"] == "cover");
  CHECK(partial["status"] == "incomplete");
  CHECK(partial.contains("error"));
  CHECK_FALSE(std::filesystem::exists(dir / "too_big.csv"));

  CHECK(invoke({"verify", fixture("correlated_bits")}).code == cli::kExitParse);
}

TEST_CASE("simulate command is deterministic") {
  const auto a = invoke({"simulate", config("lower_bound_n8"), "--samples", "20000"});
  const auto b = invoke({"simulate", config("lower_bound_n8"), "--samples", "20000", "--threads", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = invoke({"--seed", "3", "simulate", config("lower_bound_n8"), "--samples", "20000"});
  CHECK(c.json()["seed"] == 3);
  CHECK(c.out != a.out);
  CHECK(a.json()["sample_count"] == 20000);
}

TEST_CASE("probe command") {
  auto r = invoke({"probe", "--chain", "5,6", "--p", "0.01,0.05,0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["lemma_violations"] == 0);
  CHECK(r.json()["rows"].size() > 0);

  r = invoke({"probe", "--config", config("probe_chains")});
  REQUIRE(r.code == 0);
  CHECK(r.json()["lemma_violations"] == 0);
  CHECK(r.json()["graphs"].size() == 3);

  r = invoke({"probe", "--star", "3", "--p", "0.05", "--set", "1,2"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["rows"][0]["d"] == 2);
  CHECK(r.json()["rows"][0]["alpha_seq"].get<double>() > 0.0);

  CHECK(invoke({"probe", "--p", "0.1"}).code == cli::kExitParse);
  CHECK(invoke({"probe", "--chain", "30", "--p", "0.1", "--set", "0,1"}).code == cli::kExitSizeCap);
}

TEST_CASE("usage") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == cli::kExitParse);
  CHECK(invoke({"frobnicate"}).code == cli::kExitParse);
}
