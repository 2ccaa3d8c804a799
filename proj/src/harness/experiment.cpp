#include "caplab/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "caplab/bounds.hpp"
#include "caplab/capacity.hpp"
#include "caplab/class_io.hpp"
#include "caplab/error.hpp"
#include "caplab/harness/csv.hpp"
#include "caplab/parallel.hpp"
#include "caplab/rademacher.hpp"
#include "caplab/rng.hpp"

namespace caplab {

namespace {

struct TrialRow {
  bool t2_ok = true, t5_ok = true;
  double t2_slack = std::numeric_limits<double>::infinity();
  double t5_slack = std::numeric_limits<double>::infinity();
  double rademacher = 0.0, std_error = 0.0;
};

}  // namespace

ExperimentResult run_experiment(const VectorClass& g, const DiscreteDistribution& p,
                                const ExperimentConfig& config) {
  if (config.m == 0) throw ValidationError("m must be >= 1");
  if (config.trials == 0) throw ValidationError("trials must be >= 1");
  if (!(config.gamma > 0.0 && config.gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  p.validate(g.ground_size(), g.categories());

  ExperimentResult res;
  res.trials = config.trials;
  res.manifest.command = "experiment";
  res.manifest.seed = config.seed;
  nlohmann::json cfg = {{"m", config.m},           {"gamma", config.gamma},
                        {"delta", config.delta},   {"trials", config.trials},
                        {"mc_trials", config.mc_trials}, {"model", to_json(g)},
                        {"distribution", to_json(p)}};
  res.manifest.config_hash = config_hash(cfg);
  res.manifest.started = utc_timestamp();

  // Uniform-norm covering at gamma/2 of the squashed margin class over every
  // (x, k) atom. In the uniform norm the sup over 2m-tuples is attained once
  // the tuple contains every atom, which 2m >= |atoms| allows here.
  const LabeledSample atoms = all_labeled_points(g.ground_size(), g.categories());
  const TabulatedClass over_atoms = squash(margin_transform(g, atoms), config.gamma);
  CapacityQuery cq;
  cq.eps = config.gamma / 2.0;
  cq.p = PNorm::inf();
  const std::size_t tuple = std::min(2 * config.m, atoms.size());
  res.t2_cover = covering_number(over_atoms, all_points(atoms.size()), cq).value;
  if (2 * config.m < atoms.size())
    res.manifest.details["t2_cover_note"] = "2m below the atom count; cover over all atoms is an upper bound";

  std::vector<double> truth(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) truth[j] = expected_risk(g, j, p, MarginLoss::zero_one());

  const bool monte_carlo = config.m > kRademacherExactCap;
  res.rademacher_monte_carlo = monte_carlo;
  const MarginLoss indicator = MarginLoss::indicator(config.gamma);
  const MarginLoss hinge = MarginLoss::truncated_hinge(config.gamma);
  const std::uint64_t sample_stream = derive_seed(config.seed, 1);
  const std::uint64_t sign_stream = derive_seed(config.seed, 2);

  std::vector<TrialRow> rows(config.trials);
  parallel_for(config.trials, [&](std::size_t t) {
    TrialRow& row = rows[t];
    const LabeledSample s = p.sample(config.m, derive_seed(sample_stream, t));
    const TabulatedClass fgg = squash(margin_transform(g, s), config.gamma);
    const PointList pts = all_points(s.size());
    const RademacherEstimate r =
        monte_carlo ? rademacher_mc(fgg, pts, config.mc_trials, derive_seed(sign_stream, t))
                    : rademacher_exact(fgg, pts);
    row.rademacher = r.value;
    row.std_error = r.std_error;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double t2 = linf_basic_bound(empirical_risk(g, j, s, indicator), static_cast<double>(res.t2_cover),
                                         config.m, config.delta).value;
      const double t5 =
          l2_basic_bound(empirical_risk(g, j, s, hinge), r.value, config.gamma, config.m, config.delta).value;
      row.t2_slack = std::min(row.t2_slack, t2 - truth[j]);
      row.t5_slack = std::min(row.t5_slack, t5 - truth[j]);
    }
    row.t2_ok = row.t2_slack >= 0.0;
    row.t5_ok = row.t5_slack >= 0.0;
  });

  CsvWriter csv({"trial", "t2_holds", "t5_holds", "t2_min_slack", "t5_min_slack", "rademacher", "rademacher_se"});
  std::size_t hit2 = 0, hit5 = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const TrialRow& r = rows[t];
    hit2 += r.t2_ok;
    hit5 += r.t5_ok;
    csv.add_row({std::to_string(t), r.t2_ok ? "1" : "0", r.t5_ok ? "1" : "0", format_double(r.t2_slack),
                 format_double(r.t5_slack), format_double(r.rademacher), format_double(r.std_error)});
  }
  res.coverage_t2 = static_cast<double>(hit2) / static_cast<double>(config.trials);
  res.coverage_t5 = static_cast<double>(hit5) / static_cast<double>(config.trials);
  res.csv = csv.text();

  // A bound is judged valid when its coverage is not significantly below 1 - delta.
  const double floor = 1.0 - config.delta -
                       3.0 * std::sqrt(config.delta * (1.0 - config.delta) / static_cast<double>(config.trials));
  for (const auto& [name, cov] : {std::pair{"t2_coverage", res.coverage_t2}, std::pair{"t5_coverage", res.coverage_t5}})
    res.manifest.checks.push_back({name, cov >= floor ? 1u : 0u, cov >= floor ? 0u : 1u, 0});
  res.manifest.details["coverage_floor"] = floor;
  res.manifest.details["t2_holding_trials"] = hit2;
  res.manifest.details["t5_holding_trials"] = hit5;
  res.manifest.details["coverage_t2"] = res.coverage_t2;
  res.manifest.details["coverage_t5"] = res.coverage_t5;
  res.manifest.details["t2_cover"] = res.t2_cover;
  res.manifest.details["t2_cover_points"] = tuple;
  res.manifest.details["rademacher_method"] = monte_carlo ? "monte_carlo" : "exact";
  if (monte_carlo)
    res.manifest.details["rademacher_note"] =
        "m exceeds the exact enumeration cap; per-sample Monte Carlo estimate used";
  res.manifest.finished = utc_timestamp();
  if (!config.out_dir.empty()) {
    write_text_file(config.out_dir + "/experiment.csv", res.csv);
    res.manifest.outputs.push_back("experiment.csv");
    res.manifest.write(config.out_dir);
  }
  return res;
}

}  // namespace caplab
