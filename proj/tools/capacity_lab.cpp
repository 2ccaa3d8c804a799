#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "caplab/bounds.hpp"
#include "caplab/capacity.hpp"
#include "caplab/class_io.hpp"
#include "caplab/error.hpp"
#include "caplab/harness/experiment.hpp"
#include "caplab/harness/plot.hpp"
#include "caplab/harness/sweep.hpp"
#include "caplab/harness/verify.hpp"
#include "caplab/rademacher.hpp"

using namespace caplab;
using OJson = nlohmann::ordered_json;

namespace {

// A class file holds either a literal class or a generator description.
AnyClass load_any(const Json& j, std::uint64_t seed) {
  if (j.is_object() && j.contains("kind")) return generate_class(j, seed);
  return any_class_from_json(j);
}

TabulatedClass load_scalar(const Json& j, std::uint64_t seed, const std::string& what) {
  AnyClass a = load_any(j, seed);
  if (auto* f = std::get_if<TabulatedClass>(&a)) return *f;
  throw ValidationError(what + ": expected a scalar class, got a vector class");
}

VectorClass load_vector(const Json& j, std::uint64_t seed, const std::string& what) {
  AnyClass a = load_any(j, seed);
  if (auto* g = std::get_if<VectorClass>(&a)) return *g;
  throw ValidationError(what + ": expected a vector class (with \"components\")");
}

// Parameter lookup with field-path errors.
struct Params {
  const Json& j;

  const Json& at(const std::string& key) const {
    if (!j.contains(key)) throw ValidationError("params: missing field '" + key + "'");
    return j[key];
  }
  double num(const std::string& key) const {
    if (!at(key).is_number()) throw ValidationError("params: field '" + key + "' must be a number");
    return j[key].get<double>();
  }
  double num(const std::string& key, double fallback) const { return j.contains(key) ? num(key) : fallback; }
  std::size_t count(const std::string& key) const {
    if (!at(key).is_number_unsigned()) throw ValidationError("params: field '" + key + "' must be a nonnegative integer");
    return j[key].get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    return j.contains(key) ? count(key) : fallback;
  }
  int integer(const std::string& key) const {
    if (!at(key).is_number_integer()) throw ValidationError("params: field '" + key + "' must be an integer");
    return j[key].get<int>();
  }
};

PointList points_or_all(const Json& j, std::size_t ground) {
  if (!j.contains("points")) return all_points(ground);
  PointList pts;
  for (const auto& v : j["points"]) {
    if (!v.is_number_unsigned()) throw ValidationError("params: 'points' must hold point indices");
    pts.push_back(v.get<std::size_t>());
  }
  return pts;
}

ChainSchedule schedule_from(const Json& j, std::size_t c, double gamma) {
  if (!j.contains("schedule")) throw ValidationError("params: missing field 'schedule'");
  const Json& s = j["schedule"];
  if (s.is_array()) return ChainSchedule("custom", s.get<std::vector<double>>());
  Params p{s};
  const std::string kind = s.value("kind", "");
  if (kind == "c_gamma_root") return ChainSchedule::geometric_c_gamma_root(c, gamma, p.count("N"));
  if (kind == "diam") return ChainSchedule::geometric_diam(p.num("diam"), p.count("N"));
  throw ValidationError("params: schedule must be a list of radii or {\"kind\": \"c_gamma_root\"|\"diam\", ...}");
}

BoundReport run_bound(const std::string& which, const Json& j, std::uint64_t seed) {
  Params p{j};
  if (which == "t2") return linf_basic_bound(p.num("L_emp", 0.0), p.num("cov"), p.count("m"), p.num("delta"));
  if (which == "t4")
    return linf_final_bound(p.num("L_emp", 0.0), p.count("C"), p.count("m"), p.num("gamma"), p.num("M"),
                            p.num("delta"), p.num("d"));
  if (which == "t5")
    return l2_basic_bound(p.num("L_emp", 0.0), p.num("R"), p.num("gamma"), p.count("m"), p.num("delta"));
  if (which == "t6") {
    const std::size_t c = p.count("C");
    const double gamma = p.num("gamma");
    const ChainSchedule h = schedule_from(j, c, gamma);
    if (j.contains("model")) {
      const VectorClass g = load_vector(p.at("model"), seed, "model");
      return chained_bound(h, c, p.count("m"), p.num("M"), gamma, DimOracle::measured(g.components()));
    }
    return chained_bound(h, c, p.count("m"), p.num("M"), gamma,
                         DimOracle::parametric(p.num("K"), p.integer("d"), p.num("M")));
  }
  if (which == "t7")
    return hyp1_bound(p.integer("d"), p.num("K"), p.count("C"), p.count("m"), p.num("gamma"), p.num("M"));
  if (which == "l1") return sauer_shelah_lp(p.num("eps"), p.integer("p"), p.num("M"), p.num("d"));
  if (which == "l2") return sauer_shelah_linf(p.num("eps"), p.num("M"), p.count("n"), p.num("d"));
  if (which == "l3") return menver_l2(p.num("eps"), p.num("M"), p.num("d"));
  if (which == "a1") {
    const TabulatedClass f = load_scalar(p.at("class"), seed, "class");
    const PointList pts = points_or_all(j, f.ground_size());
    const std::string form = j.value("form", "integral");
    if (form == "integral") return dudley_integral(f, pts, p.count("steps", 0));
    if (form == "chain") {
      const double diam = distance_matrix(f, pts, PNorm(2)).diameter();
      const ChainSchedule h = j.contains("schedule") ? schedule_from(j, 1, 1.0)
                                                     : ChainSchedule::geometric_diam(diam, p.count("N"));
      return dudley_bound(f, pts, h);
    }
    throw ValidationError("params: 'form' must be \"chain\" or \"integral\"");
  }
  if (which == "a6")
    return combinatorial_ss(p.num("eps"), p.integer("p"), p.num("M"), p.count("N"), p.count("n"), p.num("d"));
  throw ValidationError("unknown bound '" + which + "'");
}

int report_error(const std::exception& e, const char* kind) {
  std::cerr << "capacity-lab: " << kind << ": " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact capacity measures and margin-classifier risk bounds"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the inequality suites");
  std::vector<std::string> suites;
  std::uint64_t verify_seed = 1;
  std::string caps_file, verify_out, mutant;
  verify->add_option("--suite", suites, "Suite name (repeatable; default all)");
  verify->add_option("--seed", verify_seed, "Master seed");
  verify->add_option("--caps", caps_file, "JSON caps file")->check(CLI::ExistingFile);
  verify->add_option("--out", verify_out, "Output directory");
  verify->add_option("--mutant", mutant, "Inject a known fault")->check(CLI::IsMember({"packing-strict"}));

  // capacity
  auto* capacity = app.add_subcommand("capacity", "Compute one capacity measure of a class");
  std::string class_file, measure, norm = "1", graph_file;
  double eps = 0.0;
  bool greedy = false, exact = false;
  std::size_t uniform_n = 0, mc_trials = 10000;
  std::uint64_t capacity_seed = 1;
  capacity->add_option("--class", class_file, "Class JSON (literal or generator)")->required()->check(CLI::ExistingFile);
  capacity->add_option("--measure", measure, "covering|packing|fatdim|rademacher")
      ->required()
      ->check(CLI::IsMember({"covering", "packing", "fatdim", "rademacher"}));
  capacity->add_option("--eps", eps, "Scale (gamma for fatdim)");
  capacity->add_option("--p", norm, "1, 2, ... or inf");
  auto* g_flag = capacity->add_flag("--greedy", greedy, "Greedy solver");
  capacity->add_flag("--exact", exact, "Exact solver (default)")->excludes(g_flag);
  capacity->add_option("--uniform", uniform_n, "Uniform capacity over n-point multisets");
  capacity->add_option("--trials", mc_trials, "Monte Carlo trials when n exceeds the exact cap");
  capacity->add_option("--seed", capacity_seed, "Seed for generators and Monte Carlo");
  capacity->add_option("--graph", graph_file, "Write the threshold graph as 'i j dist' lines");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form bound");
  std::string which, params_file;
  std::uint64_t bounds_seed = 1;
  bounds->add_option("--which", which, "Bound name")
      ->required()
      ->check(CLI::IsMember({"t2", "t4", "t5", "t6", "t7", "l1", "l2", "l3", "a1", "a6"}));
  bounds->add_option("--params", params_file, "JSON parameters")->required()->check(CLI::ExistingFile);
  bounds->add_option("--seed", bounds_seed, "Seed for generator-described classes");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Tabulate bounds over a parameter grid");
  std::string grid_file, sweep_out;
  std::uint64_t sweep_seed = 0;
  sweep->add_option("--grid", grid_file, "JSON grid")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_option("--seed", sweep_seed, "Recorded in the manifest");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Coverage simulation of the guaranteed risks");
  std::string model_file, dist_file;
  ExperimentConfig ecfg;
  experiment->add_option("--model", model_file, "Vector class JSON")->required()->check(CLI::ExistingFile);
  experiment->add_option("--dist", dist_file, "Distribution JSON")->required()->check(CLI::ExistingFile);
  experiment->add_option("--m", ecfg.m, "Sample size");
  experiment->add_option("--gamma", ecfg.gamma, "Margin parameter");
  experiment->add_option("--delta", ecfg.delta, "Confidence parameter");
  experiment->add_option("--trials", ecfg.trials, "Simulated samples");
  experiment->add_option("--seed", ecfg.seed, "Master seed");
  experiment->add_option("--mc-trials", ecfg.mc_trials, "Sign vectors per sample above the exact cap");
  experiment->add_option("--out", ecfg.out_dir, "Output directory")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "Render a CSV column plot as SVG");
  std::string csv_file, spec_file, plot_out;
  plot->add_option("--csv", csv_file, "Input CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--spec", spec_file, "JSON plot spec")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      VerifyConfig cfg;
      cfg.seed = verify_seed;
      cfg.suites = suites;
      cfg.out_dir = verify_out;
      cfg.mutant_strict_packing = mutant == "packing-strict";
      if (!caps_file.empty()) cfg.apply_caps(read_json_file(caps_file));
      const VerifyRun run = run_verify(cfg);
      for (const auto& s : run.suites) {
        std::printf("%-20s instances=%zu passed=%zu failed=%zu skipped=%zu %.2fs\n", s.name.c_str(), s.instances,
                    s.passed, s.failed, s.skipped, s.seconds);
        for (const auto& n : s.notes) std::printf("  note: %s\n", n.c_str());
        for (const auto& ce : s.counterexamples) std::printf("  counterexample: %s\n", ce.dump().c_str());
      }
      std::printf("%s\n", run.ok() ? "verify: all checks passed" : "verify: FAILURES");
      return run.ok() ? 0 : 1;
    }

    if (*capacity) {
      const TabulatedClass f = load_scalar(read_json_file(class_file), capacity_seed, class_file);
      const PointList pts = all_points(f.ground_size());
      OJson out;
      out["measure"] = measure;
      out["rows"] = f.size();
      out["n"] = f.ground_size();
      if (measure == "rademacher") {
        const RademacherEstimate r = pts.size() <= kRademacherExactCap
                                         ? rademacher_exact(f, pts)
                                         : rademacher_mc(f, pts, mc_trials, capacity_seed);
        out["method"] = r.method == RademacherEstimate::EXACT ? "exact" : "monte_carlo";
        out["value"] = r.value;
        if (r.method != RademacherEstimate::EXACT) {
          out["std_error"] = r.std_error;
          out["trials"] = r.trials;
          out["seed"] = r.seed;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
      }
      if (!(eps > 0.0)) throw ValidationError("--eps must be positive");
      out["eps"] = eps;
      if (measure == "fatdim") {
        const FatShatterResult r = fat_shattering_dim(f, eps);
        out["dim"] = r.dim;
        out["witness_set"] = r.witness_set;
        if (r.certificate) {
          out["certificate"] = {{"points", r.certificate->points},
                                {"witness", r.certificate->witness},
                                {"realizers", r.certificate->realizers}};
        }
        std::cout << out.dump(2) << "\n";
        return 0;
      }
      CapacityQuery q;
      q.eps = eps;
      q.p = PNorm::parse(norm);
      q.mode = greedy ? SolveMode::GREEDY : SolveMode::EXACT;
      out["p"] = q.p.to_string();
      out["mode"] = greedy ? "greedy" : "exact";
      if (!graph_file.empty()) {
        std::ostringstream g;
        write_threshold_graph(g, distance_matrix(f, pts, q.p), eps, measure == "packing");
        write_text_file(graph_file, g.str());
      }
      const Measure which_measure = measure == "packing" ? Measure::PACKING : Measure::COVERING;
      if (uniform_n > 0) {
        const UniformResult r = uniform_capacity(f, uniform_n, which_measure, q, UniformStrategy::enumerate());
        out["uniform_n"] = uniform_n;
        out["value"] = r.value;
        out["exact"] = r.exact;
        out["argmax"] = r.argmax;
        out["tuples"] = r.tuples;
      } else {
        const CountResult r = which_measure == Measure::PACKING ? packing_number(f, pts, q) : covering_number(f, pts, q);
        out["value"] = r.value;
        out["optimal"] = r.optimal;
        out["members"] = r.members;
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*bounds) {
      const BoundReport r = run_bound(which, read_json_file(params_file), bounds_seed);
      std::cout << r.to_json().dump(2) << "\n";
      return 0;
    }

    if (*sweep) {
      const SweepOutput out = run_sweep(SweepGrid::from_json(read_json_file(grid_file)), sweep_out, sweep_seed);
      std::printf("sweep: %zu rows written to %s/sweep.csv\n", out.rows, sweep_out.c_str());
      return 0;
    }

    if (*experiment) {
      const VectorClass g = load_vector(read_json_file(model_file), ecfg.seed, model_file);
      const ExperimentResult r = run_experiment(g, read_distribution(dist_file), ecfg);
      std::printf("experiment: trials=%zu coverage_t2=%.6f coverage_t5=%.6f t2_cover=%zu rademacher=%s\n", r.trials,
                  r.coverage_t2, r.coverage_t5, r.t2_cover, r.rademacher_monte_carlo ? "monte_carlo" : "exact");
      return r.manifest.failures() == 0 ? 0 : 1;
    }

    if (*plot) {
      emit_plot(csv_file, PlotSpec::from_json(read_json_file(spec_file)), plot_out);
      return 0;
    }
  } catch (const PreconditionError& e) {
    return report_error(e, "precondition violated");
  } catch (const ResourceLimitError& e) {
    return report_error(e, "resource limit");
  } catch (const ValidationError& e) {
    return report_error(e, "invalid input");
  } catch (const nlohmann::json::exception& e) {
    return report_error(e, "invalid input");
  }
  return 0;
}
