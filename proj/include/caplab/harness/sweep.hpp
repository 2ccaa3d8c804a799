#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "caplab/harness/manifest.hpp"

namespace caplab {

/// Axes of a bound sweep. Values are sorted and deduplicated; cells are
/// visited in lexicographic order of (C, m, gamma, delta, d, K, M).
struct SweepGrid {
  std::vector<double> c{3}, m{100}, gamma{0.5}, delta{0.05}, d{1}, k{1}, bound{1};
  std::vector<std::string> bounds{"t4", "t7"};
  double l_emp = 0.0;
  std::size_t chain_levels = 3;  // N for t6 with the sqrt(C) gamma schedule

  static SweepGrid from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SweepOutput {
  std::string csv;
  std::size_t rows = 0;
  RunManifest manifest;
};

/// Builds the CSV text; with out_dir set writes sweep.csv and manifest.json.
SweepOutput run_sweep(const SweepGrid& grid, const std::string& out_dir, std::uint64_t seed = 0);

}  // namespace caplab
