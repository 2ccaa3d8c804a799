#pragma once

// Coverage simulation for the uniform-norm and Rademacher guaranteed risks.

#include <cstdint>
#include <string>

#include "caplab/fclass.hpp"
#include "caplab/harness/manifest.hpp"
#include "caplab/risk.hpp"

namespace caplab {

struct ExperimentConfig {
  std::size_t m = 40;
  double gamma = 0.5;
  double delta = 0.1;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  std::size_t mc_trials = 2000;  // sign vectors per sample when m exceeds the exact cap
  std::string out_dir;
};

struct ExperimentResult {
  std::size_t trials = 0;
  double coverage_t2 = 0.0;
  double coverage_t5 = 0.0;
  /// Uniform covering number of the squashed margin class over every (x, k) atom.
  std::size_t t2_cover = 0;
  bool rademacher_monte_carlo = false;
  std::string csv;
  RunManifest manifest;
};

ExperimentResult run_experiment(const VectorClass& g, const DiscreteDistribution& p,
                                const ExperimentConfig& config);

}  // namespace caplab
