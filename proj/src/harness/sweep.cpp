#include "caplab/harness/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "caplab/bounds.hpp"
#include "caplab/class_io.hpp"
#include "caplab/error.hpp"
#include "caplab/harness/csv.hpp"
#include "caplab/parallel.hpp"

namespace caplab {

namespace {

const std::vector<std::string> kKnownBounds = {"t4", "t6", "t7"};

std::vector<double> axis(const nlohmann::json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        throw ValidationError(std::string("field '") + key + "[" + std::to_string(i) + "]': expected a number");
      out.push_back(v[i].get<double>());
    }
  } else {
    throw ValidationError(std::string("field '") + key + "': expected a number or a nonempty array");
  }
  return out;
}

void normalize(std::vector<double>& v, const char* name, bool integral) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError(std::string("axis '") + name + "' holds a non-finite value");
    if (integral && (x < 1.0 || x != std::floor(x)))
      throw ValidationError(std::string("axis '") + name + "' must hold positive integers");
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string terms_text(const BoundReport& r) {
  std::string out;
  for (const auto& [k, v] : r.terms) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v);
  }
  return out;
}

struct Cell {
  double c, m, gamma, delta, d, k, bound;
};

BoundReport evaluate(const std::string& which, const Cell& cell, const SweepGrid& grid) {
  const auto c = static_cast<std::size_t>(cell.c);
  const auto m = static_cast<std::size_t>(cell.m);
  const int d = static_cast<int>(cell.d);
  if (which == "t4") {
    const DimOracle oracle = DimOracle::parametric(cell.k, d, cell.bound);
    return linf_final_bound(grid.l_emp, c, m, cell.gamma, cell.bound, cell.delta, oracle(cell.gamma / 8.0));
  }
  if (which == "t6") {
    const DimOracle oracle = DimOracle::parametric(cell.k, d, cell.bound);
    const ChainSchedule h = ChainSchedule::geometric_c_gamma_root(c, cell.gamma, grid.chain_levels);
    return chained_bound(h, c, m, cell.bound, cell.gamma, oracle);
  }
  return hyp1_bound(d, cell.k, c, m, cell.gamma, cell.bound);
}

}  // namespace

SweepGrid SweepGrid::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("sweep grid must be a JSON object");
  SweepGrid g;
  g.c = axis(j, "C", g.c);
  g.m = axis(j, "m", g.m);
  g.gamma = axis(j, "gamma", g.gamma);
  g.delta = axis(j, "delta", g.delta);
  g.d = axis(j, "d", g.d);
  g.k = axis(j, "K", g.k);
  g.bound = axis(j, "M", g.bound);
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    if (!b.is_array() || b.empty()) throw ValidationError("field 'bounds': expected a nonempty array");
    g.bounds.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!b[i].is_string()) throw ValidationError("field 'bounds[" + std::to_string(i) + "]': expected a string");
      g.bounds.push_back(b[i].get<std::string>());
    }
  }
  if (j.contains("L_emp")) {
    if (!j["L_emp"].is_number()) throw ValidationError("field 'L_emp': expected a number");
    g.l_emp = j["L_emp"].get<double>();
  }
  if (j.contains("N")) {
    if (!j["N"].is_number_unsigned() || j["N"].get<std::size_t>() == 0)
      throw ValidationError("field 'N': expected a positive integer");
    g.chain_levels = j["N"].get<std::size_t>();
  }
  normalize(g.c, "C", true);
  normalize(g.m, "m", true);
  normalize(g.gamma, "gamma", false);
  normalize(g.delta, "delta", false);
  normalize(g.d, "d", true);
  normalize(g.k, "K", false);
  normalize(g.bound, "M", false);
  for (const auto& b : g.bounds)
    if (std::find(kKnownBounds.begin(), kKnownBounds.end(), b) == kKnownBounds.end())
      throw ValidationError("unknown bound '" + b + "' (expected t4, t6 or t7)");
  return g;
}

nlohmann::json SweepGrid::to_json() const {
  return {{"C", c},         {"m", m}, {"gamma", gamma}, {"delta", delta},         {"d", d},
          {"K", k},         {"M", bound}, {"bounds", bounds}, {"L_emp", l_emp}, {"N", chain_levels}};
}

SweepOutput run_sweep(const SweepGrid& grid, const std::string& out_dir, std::uint64_t seed) {
  SweepOutput out;
  out.manifest.command = "sweep";
  out.manifest.seed = seed;
  out.manifest.config_hash = config_hash(grid.to_json());
  out.manifest.started = utc_timestamp();

  std::vector<Cell> cells;
  for (double c : grid.c)
    for (double m : grid.m)
      for (double g : grid.gamma)
        for (double dl : grid.delta)
          for (double d : grid.d)
            for (double k : grid.k)
              for (double b : grid.bound) cells.push_back({c, m, g, dl, d, k, b});

  std::vector<std::string> header = {"C", "m", "gamma", "delta", "d", "K", "M"};
  for (const auto& b : grid.bounds)
    for (const char* suffix : {"_status", "_value", "_log_value", "_terms"}) header.push_back(b + suffix);

  std::vector<std::vector<std::string>> rows(cells.size());
  std::vector<std::vector<int>> ok(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    auto& row = rows[i];
    for (double v : {cell.c, cell.m, cell.gamma, cell.delta, cell.d, cell.k, cell.bound})
      row.push_back(format_double(v));
    for (const auto& b : grid.bounds) {
      try {
        const BoundReport r = evaluate(b, cell, grid);
        row.insert(row.end(), {"ok", format_double(r.value), format_double(r.log_value), terms_text(r)});
        ok[i].push_back(1);
      } catch (const PreconditionError& e) {
        row.insert(row.end(), {std::string("precondition: ") + e.what(), "", "", ""});
        ok[i].push_back(0);
      } catch (const ValidationError& e) {
        row.insert(row.end(), {std::string("invalid: ") + e.what(), "", "", ""});
        ok[i].push_back(0);
      }
    }
  });

  CsvWriter csv(header);
  for (const auto& row : rows) csv.add_row(row);
  for (std::size_t b = 0; b < grid.bounds.size(); ++b) {
    CheckCount cc{grid.bounds[b]};
    for (const auto& o : ok) (o[b] ? cc.passed : cc.skipped)++;
    out.manifest.checks.push_back(cc);
  }
  out.manifest.details["cells"] = cells.size();
  out.manifest.finished = utc_timestamp();
  out.csv = csv.text();
  out.rows = csv.rows();
  if (!out_dir.empty()) {
    write_text_file(out_dir + "/sweep.csv", out.csv);
    out.manifest.outputs.push_back("sweep.csv");
    out.manifest.write(out_dir);
  }
  return out;
}

}  // namespace caplab
