#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "caplab/bounds.hpp"
#include "caplab/capacity.hpp"
#include "caplab/error.hpp"
#include "caplab/rademacher.hpp"
#include "caplab/rng.hpp"
#include "caplab/special.hpp"

using namespace caplab;
using nlohmann::json;

namespace {

json golden(const std::string& file) {
  std::ifstream in(std::string(CAPLAB_GOLDEN_DIR) + "/" + file);
  REQUIRE(in.good());
  return json::parse(in);
}

const json& derived() {
  static const json j = golden("derived_values.json");
  return j;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("golden values") {
  const json& g = derived();
  CHECK(sauer_shelah_k(1.0, 1, 1.0) == g["sauer_shelah_k_eps1_p1_M1"].get<long long>());
  CHECK(rel(sauer_shelah_lp(1.0, 1, 1.0, 1).log_value, g["sauer_shelah_lp_eps1_p1_M1_d1_log"]) < 1e-9);
  CHECK(rel(sauer_shelah_lp(0.5, 2, 1.0, 3).log_value, g["sauer_shelah_lp_eps05_p2_M1_d3_log"]) < 1e-9);
  CHECK(rel(sauer_shelah_linf(2.0, 1.0, 1, 1).value, g["sauer_shelah_linf_eps2_M1_n1_d1"]) < 1e-9);
  CHECK(rel(sauer_shelah_linf(0.3, 1.0, 6, 2).log_value, g["sauer_shelah_linf_eps03_M1_n6_d2_log"]) < 1e-9);
  CHECK(rel(menver_l2(2.0, 1.0, 1).value, g["menver_l2_eps2_M1_d1"]) < 1e-9);
  CHECK(rel(menver_l2(0.5, 1.0, 2).log_value, g["menver_l2_eps05_M1_d2_log"]) < 1e-9);
  CHECK(rel(linf_basic_bound(0.1, 16, 200, 0.05).value, g["linf_basic_L01_cov16_m200_d005"]) < 1e-9);
  CHECK(rel(linf_final_bound(0.1, 3, 100, 0.5, 1.0, 0.05, 2).value, g["linf_final_L01_C3_m100_g05_M1_d005_dim2"]) <
        1e-9);
  CHECK(rel(l2_basic_bound(0.2, 0.05, 0.5, 50, 0.05).value, g["l2_basic_L02_R005_g05_m50_d005"]) < 1e-9);
  CHECK(rel(hyp1_f(16, 1.0, 0.5), g["hyp1_F_C16_M1_g05"]) < 1e-9);
  CHECK(rel(hyp1_bound(2, 1.0, 4, 16, 0.5, 1.0).value, g["hyp1_d2_K1_M1_g05_C4_m16"]) < 1e-9);
  CHECK(rel(combinatorial_ss(2.0, 1, 1.0, 4, 2, 1).value, g["a6_N4_p1_d1_n2_M1_eps2"]) < 1e-9);
  for (const auto& cell : g["t7_d2_sweep_cells"]) {
    const BoundReport r = hyp1_bound(2, cell["K"], cell["C"], cell["m"], cell["gamma"], cell["M"]);
    CHECK(rel(r.value, cell["value"]) < 1e-9);
  }
}

TEST_CASE("regime golden files") {
  for (const char* file : {"t7_d1.json", "t7_d2.json", "t7_d3.json", "t7_d5.json"}) {
    CAPTURE(file);
    const json g = golden(file);
    const json& in = g["inputs"];
    const BoundReport r = hyp1_bound(in["d"], in["K"], in["C"], in["m"], in["gamma"], in["M"]);
    CHECK(rel(r.value, g["value"]) < 1e-9);
    REQUIRE(!r.notes.empty());
    CHECK(r.notes.front() == "regime " + g["regime"].get<std::string>());
    for (const auto& [key, value] : g["terms"].items()) {
      CAPTURE(key);
      CHECK(rel(r.term(key), value.get<double>()) < 1e-9);
    }
  }
}

TEST_CASE("collapsed exponents") {
  const long long k = sauer_shelah_k(1.0, 1, 1.0);
  CHECK(rel(sauer_shelah_lp(1.0, 1, 1.0, 0).value, std::exp2(2.0 * (k + 1))) < 1e-12);
  CHECK(menver_l2(1.0, 1.0, 0).value == 1.0);
  CHECK_THROWS_AS(sauer_shelah_linf(1.0, 1.0, 3, 0), ValidationError);
  CHECK_THROWS_AS(sauer_shelah_lp(2.5, 1, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(menver_l2(0.0, 1.0, 1), ValidationError);
}

TEST_CASE("uniform-norm bound is nonincreasing in eps") {
  for (std::size_t n : {1u, 4u, 20u})
    for (double d : {1.0, 2.0, 5.0}) {
      double prev = INFINITY;
      for (int i = 1; i <= 200; ++i) {
        const double eps = 2.0 * i / 200.0;
        const double v = sauer_shelah_linf(eps, 1.0, n, d).log_value;
        CHECK(v <= prev + 1e-12);
        prev = v;
      }
    }
}

TEST_CASE("risk bound examples") {
  const BoundReport t2 = linf_basic_bound(0.0, 1, 2, 2.0 / (std::numbers::e * std::numbers::e));
  CHECK(t2.value == doctest::Approx(std::sqrt(2.0) + 0.5).epsilon(1e-14));
  CHECK(t2.term("residual") == 0.5);
  double prev = 0.0;
  for (double cov = 1; cov < 1e6; cov *= 3) {
    const double v = linf_basic_bound(0.1, cov, 50, 0.1).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(linf_basic_bound(0.1, 0.5, 50, 0.1), ValidationError);
  CHECK_THROWS_AS(linf_basic_bound(0.1, 2, 50, 1.0), ValidationError);

  const BoundReport t4 = linf_final_bound(0.1, 3, 100, 0.5, 1.0, 0.5, 0);
  CHECK(t4.value == doctest::Approx(0.1 + std::sqrt(2.0 / 100 * std::log(4.0)) + 0.01).epsilon(1e-14));
  const double c1 = linf_final_bound(0.0, 1, 100, 0.5, 1.0, 0.5, 2).term("capacity_only");
  const double c4 = linf_final_bound(0.0, 4, 100, 0.5, 1.0, 0.5, 2).term("capacity_only");
  CHECK(c4 / c1 == doctest::Approx(2.0).epsilon(1e-14));
  const double c3 = linf_final_bound(0.0, 3, 100, 0.5, 1.0, 0.5, 2).term("capacity_only");
  const double c12 = linf_final_bound(0.0, 12, 100, 0.5, 1.0, 0.5, 2).term("capacity_only");
  CHECK(c12 / c3 == doctest::Approx(derived()["t4_capacity_ratio_C3_to_C12"].get<double>()).epsilon(1e-14));
  CHECK_THROWS_AS(linf_final_bound(0.1, 3, 3, 0.5, 1.0, 0.5, 1), PreconditionError);

  const BoundReport t5 = l2_basic_bound(0.3, 0.0, 0.5, 50, 1.0 / std::numbers::e);
  CHECK(t5.value == doctest::Approx(0.4).epsilon(1e-14));
  double last = INFINITY;
  for (double g = 0.05; g <= 1.0; g += 0.05) {
    const double v = l2_basic_bound(0.1, 0.2, g, 50, 0.1).value;
    CHECK(v < last);
    last = v;
  }
  CHECK_THROWS_AS(l2_basic_bound(0.1, -0.1, 0.5, 50, 0.1), ValidationError);
}

TEST_CASE("log and direct evaluation agree") {
  // Recompute the moderate-size bounds directly from their formulas.
  for (double eps : {0.5, 1.0, 2.0})
    for (double d : {1.0, 2.0}) {
      const double lin = 2.0 * std::pow(16.0 * 3 / (eps * eps), d * std::log2(4.0 * std::numbers::e * 3 / (d * eps)));
      CHECK(rel(sauer_shelah_linf(eps, 1.0, 3, d).value, lin) < 1e-9);
      const double mv = std::pow(3584.0 * std::numbers::e * std::pow(2.0 / eps, 5), 4.0 * d);
      CHECK(rel(menver_l2(eps, 1.0, d).value, mv) < 1e-9);
    }
  const double a6 = std::exp2(3.0 * 2 + 1) * std::pow(std::numbers::e * 3 * 2, 3.0 * 2);
  CHECK(rel(combinatorial_ss(2.0, 1, 1.0, 4, 2, 1).value, a6) < 1e-9);
  const BoundReport huge = sauer_shelah_lp(0.1, 3, 1.0, 4);
  CHECK(huge.log_domain);
  CHECK(std::isinf(huge.value));
  CHECK(huge.dominates(1e300));
  CHECK(huge.strictly_dominates(1e300));
}

TEST_CASE("strict packing bound preconditions") {
  CHECK_THROWS_AS(combinatorial_ss(2.0, 1, 1.0, 4, 2, 0.5), ValidationError);
  CHECK_THROWS_AS(combinatorial_ss(1.5, 1, 1.0, 4, 2, 1), PreconditionError);
  CHECK_THROWS_AS(combinatorial_ss(2.0, 1, 1.0, 3, 2, 1), ValidationError);
}

TEST_CASE("decomposition examples") {
  const TabulatedClass one(1.0, 2, {0.2, -0.4});
  LabeledSample s;
  s.points = {{0, 1}, {1, 2}};
  CHECK(decomposition_rhs(VectorClass({one, one, one}), s, 0.3, PNorm(2)).value == 1.0);

  // Two components need two centers at eps / sqrt(3); the third needs one.
  const TabulatedClass two = TabulatedClass::from_rows(1.0, {{0.0, 0.0}, {1.0, 1.0}});
  const TabulatedClass flat = TabulatedClass::from_rows(1.0, {{0.0, 0.0}, {0.0, 0.0}});
  const BoundReport r = decomposition_rhs(VectorClass({two, two, flat}), s, 1.0, PNorm(2));
  CHECK(r.value == 4.0);
  CHECK(r.term("cover_1") == 2.0);
  CHECK(r.term("cover_3") == 1.0);
  // Component order does not matter.
  CHECK(decomposition_rhs(VectorClass({flat, two, two}), s, 1.0, PNorm(2)).value == 4.0);
}

TEST_CASE("decomposition dominates the margin class cover") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 3, n = 1 + rng.index(3);
    std::vector<TabulatedClass> comps;
    for (std::size_t k = 0; k < c; ++k) comps.push_back(generate_uniform(1 + rng.index(3), n, 1.0, rng.bits()));
    const VectorClass g = assemble_product(comps);
    LabeledSample s;
    for (std::size_t i = 0; i < 1 + rng.index(3); ++i) s.points.push_back({rng.index(n), 1 + rng.index(c)});
    const PNorm p = rng.coin() ? PNorm(1 + static_cast<int>(rng.index(3))) : PNorm::inf();
    const double eps = rng.uniform(0.05, 1.0);
    const BoundReport rhs = decomposition_rhs(g, s, eps, p);
    const TabulatedClass f = margin_transform(g, s);
    CapacityQuery q;
    q.eps = eps;
    q.p = p;
    CHECK(rhs.dominates(static_cast<double>(covering_number(f, all_points(f.ground_size()), q).value)));
  }
}

TEST_CASE("kms examples") {
  const TabulatedClass one(1.0, 2, {0.5, 0.5});
  const PointList pts = all_points(2);
  CHECK(kms_rhs({one, one, one}, pts).value == 0.0);
  const TabulatedClass pm = TabulatedClass::from_rows(1.0, {{1.0, 1.0}, {-1.0, -1.0}});
  const double three = kms_rhs({pm, pm, pm}, pts).value;
  const double six = kms_rhs({pm, pm, pm, pm, pm, pm}, pts).value;
  CHECK(three == 1.5);
  CHECK(six == 2.0 * three);
}

TEST_CASE("chained bound with a zero dimension") {
  // Single-function components have dimension 0 at every scale.
  const TabulatedClass flat(1.0, 2, {0.1, -0.3});
  const DimOracle zero = DimOracle::measured({flat, flat, flat, flat});
  const BoundReport r = chained_bound(ChainSchedule::geometric_c_gamma_root(4, 0.5, 2), 4, 20, 1.0, 0.5, zero);
  CHECK(r.value == 0.25);
  const ChainSchedule h("custom", {1.0, 0.4, 0.1});
  CHECK(chained_bound(h, 3, 30, 1.0, 0.5, zero).value == 0.1);
  CHECK_THROWS_AS(chained_bound(ChainSchedule("low", {0.3, 0.1}), 3, 30, 1.0, 0.5, zero), PreconditionError);
  CHECK_THROWS_AS(chained_bound(ChainSchedule("high", {10.0, 5.0}), 3, 30, 1.0, 0.5, zero), PreconditionError);
}

TEST_CASE("schedules") {
  const ChainSchedule g = ChainSchedule::geometric_diam(2.0, 3);
  CHECK(g.values() == std::vector<double>{2.0, 1.0, 0.5, 0.25});
  CHECK(ChainSchedule::geometric_diam(0.0, 2).degenerate());
  const ChainSchedule r = ChainSchedule::geometric_c_gamma_root(4, 0.5, 2);
  CHECK(r.values() == std::vector<double>{1.0, 0.5, 0.25});
  CHECK(ChainSchedule::t7_d1(0.5, 2).values() == std::vector<double>{0.5, 0.125, 0.03125});
  const ChainSchedule d2 = ChainSchedule::t7_d2(0.5, 4, 16);
  CHECK(d2.levels() == 1);
  CHECK(d2(1) == doctest::Approx(0.5 * std::pow(4.0, 0.75) / 4.0).epsilon(1e-15));
  const ChainSchedule d3 = ChainSchedule::t7_d3(0.5, 4, 4000, 4);
  CHECK(d3.levels() == static_cast<std::size_t>(std::ceil(0.25 * std::log2(1000.0))));
  CHECK_THROWS_AS(ChainSchedule("bad", {1.0}), ValidationError);
  CHECK_THROWS_AS(ChainSchedule("bad", {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(ChainSchedule("bad", {1.0, -0.5}), ValidationError);
  CHECK_THROWS_AS(ChainSchedule::t7_d2(0.5, 4, 4), PreconditionError);
  CHECK_THROWS_AS(ChainSchedule::t7_d3(0.5, 4, 40, 2), ValidationError);
}

TEST_CASE("third regime scales through the log factor only") {
  // Normalized value divided by the sqrt-log factor is constant at fixed m / C.
  const int d = 3;
  const double gamma = 0.5, k = 1.0, ratio = 50.0;
  double base = 0.0;
  for (std::size_t c : {3u, 6u, 12u, 24u}) {
    const std::size_t m = static_cast<std::size_t>(ratio * c);
    const BoundReport r = hyp1_bound(d, k, c, m, gamma, 1.0);
    const double norm = r.value / (std::sqrt(c) * std::pow(1.0 / ratio, 1.0 / d));
    const double shape = r.term("chain") / std::sqrt(static_cast<double>(c)) /
                         std::sqrt(std::log(14.0 / gamma * std::pow(ratio, 1.0 / d)));
    if (base == 0.0) base = shape;
    CHECK(rel(shape, base) < 1e-12);
    CHECK(norm > 0.0);
  }
  CHECK_THROWS_AS(hyp1_bound(3, 1.0, 5, 5, 0.5, 1.0), PreconditionError);
}

TEST_CASE("dudley examples") {
  const TabulatedClass one(1.0, 3, {0.1, 0.2, 0.3});
  const PointList pts = all_points(3);
  CHECK(dudley_integral(one, pts).value == 0.0);
  CHECK(dudley_bound(one, pts, ChainSchedule::geometric_diam(0.0, 3)).value == 0.0);

  const TabulatedClass pm = TabulatedClass::from_rows(1.0, {{1.0, 1.0}, {-1.0, -1.0}});
  const PointList two = all_points(2);
  const double r = rademacher_exact(pm, two).value;
  CHECK(r == 0.5);
  CHECK(r <= dudley_integral(pm, two).value);
  CHECK(r <= dudley_bound(pm, two, ChainSchedule::geometric_diam(2.0, 3)).value);
  CHECK_THROWS_AS(dudley_bound(pm, two, ChainSchedule::geometric_diam(1.0, 3)), PreconditionError);
}

TEST_CASE("repeating points scales the entropy sums by one over sqrt 2") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const TabulatedClass f = generate_uniform(2 + rng.index(5), 1 + rng.index(4), 1.0, rng.bits());
    const PointList base = all_points(f.ground_size());
    PointList twice = base;
    twice.insert(twice.end(), base.begin(), base.end());
    const double diam = distance_matrix(f, base, PNorm(2)).diameter();
    // Covering numbers are unchanged; only the 1/sqrt(n) factor moves.
    CHECK(dudley_integral(f, twice).value * std::sqrt(2.0) ==
          doctest::Approx(dudley_integral(f, base).value).epsilon(1e-12));
    if (diam > 0.0) {
      const ChainSchedule h = ChainSchedule::geometric_diam(diam, 4);
      const BoundReport a = dudley_bound(f, base, h), b = dudley_bound(f, twice, h);
      CHECK((b.value - b.term("h_N")) * std::sqrt(2.0) == doctest::Approx(a.value - a.term("h_N")).epsilon(1e-12));
      CHECK(b.term("cover_1") == a.term("cover_1"));
    }
  }
}

TEST_CASE("exact integral matches fine midpoint quadrature") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const TabulatedClass f = generate_uniform(2 + rng.index(5), 1 + rng.index(4), 1.0, rng.bits());
    const PointList pts = all_points(f.ground_size());
    const double exact = dudley_integral(f, pts).value;
    const double approx = dudley_integral(f, pts, 20000).value;
    CHECK(std::fabs(exact - approx) <= 1e-2 * std::max(exact, 1e-3));
  }
}

TEST_CASE("erf") {
  CHECK(caplab::erf(0.0) == 0.0);
  CHECK(std::fabs(caplab::erf(1.0) - derived()["erf_1"].get<double>()) <= 1e-12);
  for (const auto& row : derived()["erf_grid"]) {
    const double x = row[0], want = row[1];
    CAPTURE(x);
    CHECK(std::fabs(caplab::erf(x) - want) <= 1e-12);
    CHECK(caplab::erf(-x) == -caplab::erf(x));
  }
  for (const auto& row : derived()["erfc_grid"]) {
    const double x = row[0], want = row[1];
    CAPTURE(x);
    CHECK(std::fabs(caplab::erfc(x) - want) <= 1e-12 * std::max(1.0, want) + 1e-15 * want);
    if (want > 1e-300) CHECK(rel(caplab::erfc(x), want) < 1e-9);
  }
}
