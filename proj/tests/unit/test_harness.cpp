#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "caplab/error.hpp"
#include "caplab/fclass.hpp"
#include "caplab/harness/csv.hpp"
#include "caplab/harness/experiment.hpp"
#include "caplab/harness/manifest.hpp"
#include "caplab/harness/plot.hpp"
#include "caplab/harness/sweep.hpp"
#include "caplab/harness/verify.hpp"

using namespace caplab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("caplab_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("csv writer and parser") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(INFINITY) == "inf");
  CsvWriter w({"a", "b"});
  w.add_row({"1", "x,y"});
  w.add_row({"say \"hi\"", ""});
  CHECK(w.rows() == 2);
  CHECK(w.text() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
  CHECK_THROWS_AS(w.add_row({"1"}), ValidationError);
  const CsvTable t = parse_csv(w.text());
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[1][0] == "say \"hi\"");
  CHECK(t.column("b") == 1);
  try {
    t.column("zeta");
    FAIL("missing column accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("zeta") != std::string::npos);
  }
}

TEST_CASE("manifest serialization") {
  RunManifest m;
  m.command = "verify";
  m.seed = 4;
  m.checks.push_back({"a", 3, 1, 0});
  m.checks.push_back({"b", 2, 0, 5});
  CHECK(m.failures() == 1);
  const auto j = m.to_json();
  CHECK(j["seed"] == 4);
  CHECK(j["version"] == kArtifactVersion);
  CHECK(j["checks"].size() == 2);
  CHECK(config_hash(nlohmann::json{{"x", 1}, {"y", 2}}) == config_hash(nlohmann::json{{"y", 2}, {"x", 1}}));
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(hex64(255).size() == 16);
  const fs::path dir = scratch("manifest");
  m.write(dir.string());
  CHECK(nlohmann::json::parse(slurp(dir / "manifest.json"))["command"] == "verify");
}

TEST_CASE("single-cell sweep") {
  SweepGrid g = SweepGrid::from_json(nlohmann::json{{"C", 3}, {"m", 100}, {"bounds", {"t4", "t7"}}});
  const SweepOutput out = run_sweep(g, "");
  CHECK(out.rows == 1);
  const CsvTable t = parse_csv(out.csv);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][t.column("t4_status")] == "ok");
  CHECK(t.rows[0][t.column("t7_status")] == "ok");
  CHECK(std::stod(t.rows[0][t.column("t4_value")]) > 0.0);
}

TEST_CASE("sweep keeps cells that fail preconditions") {
  const SweepGrid g = SweepGrid::from_json(nlohmann::json{{"C", {3, 12}}, {"m", {10, 200}}, {"bounds", {"t4", "t6", "t7"}}});
  const SweepOutput out = run_sweep(g, "");
  CHECK(out.rows == 4);
  const CsvTable t = parse_csv(out.csv);
  // Row order is (C, m) lexicographic; C=12, m=10 violates m > C.
  CHECK(t.rows[0][0] == "3");
  CHECK(t.rows[2][t.column("t4_status")].rfind("precondition", 0) == 0);
  CHECK(t.rows[3][t.column("t4_status")] == "ok");
  CHECK(out.manifest.failures() == 0);
  CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json{{"C", 2.5}}), ValidationError);
  CHECK_THROWS_AS(SweepGrid::from_json(nlohmann::json{{"bounds", {"t9"}}}), ValidationError);
}

TEST_CASE("sweep matches the oracle cells and the sqrt C ratio") {
  const SweepGrid g = SweepGrid::from_json(
      nlohmann::json{{"C", {3, 12}}, {"m", 400}, {"d", 2}, {"gamma", 0.5}, {"bounds", {"t4"}}});
  const CsvTable t = parse_csv(run_sweep(g, "").csv);
  auto capacity = [&](std::size_t row) {
    const std::string terms = t.rows[row][t.column("t4_terms")];
    const auto at = terms.find("capacity_only=");
    REQUIRE(at != std::string::npos);
    return std::stod(terms.substr(at + 14));
  };
  CHECK(capacity(1) / capacity(0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("plot examples") {
  const std::string csv = "x,y\n1,2\n3,4\n";
  PlotSpec spec = PlotSpec::from_json(nlohmann::json{{"x", "x"}, {"y", "y"}});
  const std::string svg = render_plot(csv, spec);
  CHECK(count(svg, "<polyline") == 1);
  const auto at = svg.find("points=\"");
  const auto end = svg.find('"', at + 8);
  CHECK(count(svg.substr(at + 8, end - at - 8), ",") == 2);
  CHECK(render_plot(csv, spec) == svg);
  CHECK_THROWS_AS(render_plot("x,y\n", spec), ValidationError);
  spec.y = {"missing"};
  try {
    render_plot(csv, spec);
    FAIL("missing column accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  const PlotSpec scatter = PlotSpec::from_json(nlohmann::json{{"x", "x"}, {"y", {"y"}}, {"kind", "scatter"}, {"log_y", true}});
  CHECK(count(render_plot(csv, scatter), "<circle") == 2);
  CHECK_THROWS_AS(PlotSpec::from_json(nlohmann::json{{"y", "y"}}), ValidationError);

  const fs::path dir = scratch("plot");
  std::ofstream(dir / "in.csv") << csv;
  const PlotSpec s2 = PlotSpec::from_json(nlohmann::json{{"x", "x"}, {"y", "y"}});
  emit_plot((dir / "in.csv").string(), s2, (dir / "a.svg").string());
  emit_plot((dir / "in.csv").string(), s2, (dir / "b.svg").string());
  CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
}

TEST_CASE("caps parsing") {
  VerifyConfig c;
  c.apply_caps(nlohmann::json::parse(R"({"instances": {"kolmogorov": 5}, "limits": {"exact_class_cap": 32}})"));
  CHECK(c.instances["kolmogorov"] == 5);
  CHECK(c.limits.exact_class_cap == 32);
  CHECK_THROWS_AS(c.apply_caps(nlohmann::json::parse(R"({"instances": {"nope": 5}})")), ValidationError);
  CHECK_THROWS_AS(c.apply_caps(nlohmann::json::parse(R"({"limits": {"exact_class_cap": 0}})")), ValidationError);
  CHECK_THROWS_AS(c.apply_caps(nlohmann::json::parse(R"({"limits": {"memo_cap": "big"}})")), ValidationError);
  CHECK(suite_names().size() == 14);
  for (const auto& s : suite_names()) CHECK(default_instances(s) > 0);
}

TEST_CASE("small verify run writes its outputs") {
  VerifyConfig c;
  c.seed = 3;
  c.suites = {"kolmogorov", "losses"};
  c.instances = {{"kolmogorov", 10}, {"losses", 5}};
  const fs::path dir = scratch("verify");
  c.out_dir = dir.string();
  const VerifyRun run = run_verify(c);
  CHECK(run.ok());
  REQUIRE(run.suites.size() == 2);
  CHECK(run.suites[0].instances == 10);
  CHECK(run.suites[0].failed == 0);
  CHECK(run.suites[0].passed > 0);
  CHECK(fs::exists(dir / "verify_results.csv"));
  CHECK(fs::exists(dir / "manifest.json"));

  VerifyConfig bad = c;
  bad.out_dir = (dir / "mutant").string();
  bad.suites = {"kolmogorov"};
  bad.instances = {{"kolmogorov", 40}};
  bad.mutant_strict_packing = true;
  const VerifyRun mutant = run_verify(bad);
  CHECK(!mutant.ok());
  CHECK(mutant.suites[0].counterexamples.size() >= 1);
  CHECK(!fs::is_empty(dir / "mutant" / "counterexamples"));
}

TEST_CASE("experiment degenerate case and determinism") {
  // One atom with a perfect predictor: every bound holds.
  const TabulatedClass good(1.0, 1, {0.9}), bad(1.0, 1, {0.0});
  const VectorClass g({good, bad, bad});
  const DiscreteDistribution p({{0, 1, 1.0}});
  ExperimentConfig cfg;
  cfg.m = 10;
  cfg.trials = 50;
  cfg.seed = 5;
  const ExperimentResult a = run_experiment(g, p, cfg);
  CHECK(a.coverage_t2 == 1.0);
  CHECK(a.coverage_t5 == 1.0);
  CHECK(a.manifest.failures() == 0);
  const ExperimentResult b = run_experiment(g, p, cfg);
  CHECK(a.csv == b.csv);
  CHECK(parse_csv(a.csv).rows.size() == 50);
}
