#pragma once

// Property suites: each checks an inequality between an exact combinatorial
// quantity and a closed-form right-hand side on seeded random instances.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "caplab/capacity.hpp"
#include "caplab/harness/manifest.hpp"

namespace caplab {

struct VerifyConfig {
  std::uint64_t seed = 1;
  std::string out_dir;                 // empty: no files
  std::vector<std::string> suites;     // empty: all
  /// Per-suite instance-count overrides, e.g. {"kolmogorov": 50}.
  nlohmann::json instances = nlohmann::json::object();
  CapacityLimits limits;
  /// Mutation test: packing uses d > eps.
  bool mutant_strict_packing = false;

  nlohmann::json to_json() const;
  /// Caps file: {"instances": {...}, "limits": {"exact_class_cap": ..., ...}}.
  void apply_caps(const nlohmann::json& caps);
};

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  double seconds = 0.0;
  /// Up to ten failing instances, verbatim.
  nlohmann::ordered_json counterexamples = nlohmann::ordered_json::array();
  std::vector<std::string> notes;
};

const std::vector<std::string>& suite_names();
/// Default instance count of a suite.
std::size_t default_instances(const std::string& suite);

SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

struct VerifyRun {
  std::vector<SuiteResult> suites;
  RunManifest manifest;
  bool ok() const;
};

/// Runs the selected suites; with out_dir set writes verify_results.csv,
/// counterexample class files, and manifest.json.
VerifyRun run_verify(const VerifyConfig& config);

}  // namespace caplab
