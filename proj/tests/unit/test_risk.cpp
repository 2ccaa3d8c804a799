#include <doctest.h>

#include <cmath>

#include "caplab/error.hpp"
#include "caplab/fclass.hpp"
#include "caplab/risk.hpp"
#include "caplab/rng.hpp"

using namespace caplab;

namespace {

VectorClass single(double a, double b, double c) {
  return VectorClass({TabulatedClass(1.0, 1, {a}), TabulatedClass(1.0, 1, {b}), TabulatedClass(1.0, 1, {c})});
}

VectorClass random_vector_class(Rng& rng, std::size_t rows, std::size_t n, std::size_t c) {
  std::vector<TabulatedClass> comps;
  for (std::size_t k = 0; k < c; ++k)
    comps.push_back(rng.coin() ? generate_uniform(rows, n, 1.0, rng.bits())
                               : generate_grid(rows, n, CodomainGrid(1.0, 2), true, rng.bits()));
  return VectorClass(comps);
}

DiscreteDistribution random_distribution(Rng& rng, std::size_t n, std::size_t c) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 1; y <= c; ++y) {
      const double w = rng.uniform01();
      atoms.push_back({x, y, w});
      total += w;
    }
  for (auto& a : atoms) a.p /= total;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) sum += atoms[i].p;
  atoms.back().p = 1.0 - sum;
  return DiscreteDistribution(atoms);
}

}  // namespace

TEST_CASE("decision rule") {
  CHECK(decision_rule(single(0.2, 0.8, -0.1), 0, 0) == std::optional<std::size_t>(2));
  CHECK(!decision_rule(single(0.5, 0.5, 0.1), 0, 0));
  CHECK(!decision_rule(single(0.3, 0.3, 0.3), 0, 0));
  CHECK_THROWS_AS(decision_rule(single(0.3, 0.3, 0.3), 1, 0), ValidationError);
}

TEST_CASE("loss examples") {
  CHECK(MarginLoss::indicator(0.5)(0.5) == 0.0);
  CHECK(MarginLoss::indicator(0.5)(0.49) == 1.0);
  CHECK(MarginLoss::truncated_hinge(0.5)(0.25) == 0.5);
  CHECK(MarginLoss::truncated_hinge(0.5)(-3.0) == 1.0);
  CHECK(MarginLoss::truncated_hinge(0.5)(0.9) == 0.0);
  CHECK(MarginLoss::zero_one()(0.0) == 1.0);
  CHECK(MarginLoss::zero_one()(1e-12) == 0.0);
  CHECK_THROWS_AS(MarginLoss::indicator(0.0), ValidationError);
  CHECK_THROWS_AS(MarginLoss::truncated_hinge(1.5), ValidationError);
}

TEST_CASE("custom losses are validated") {
  CHECK_NOTHROW(MarginLoss::custom("ramp", 0.5, [](double t) { return t <= 0 ? 1.0 : t >= 0.5 ? 0.0 : 1.0 - 2 * t; }));
  CHECK_THROWS_AS(MarginLoss::custom("bad_zero", 0.5, [](double t) { return t < 0.25 ? 0.5 : 0.0; }), ValidationError);
  CHECK_THROWS_AS(MarginLoss::custom("increasing", 0.5,
                                     [](double t) { return t <= 0 ? 1.0 : t >= 0.5 ? (t > 1 ? 1.0 : 0.0) : 1 - 2 * t; }),
                  ValidationError);
  CHECK_THROWS_AS(MarginLoss::custom("range", 0.5, [](double t) { return t <= 0 ? 1.5 - t : std::max(0.0, 1 - 2 * t); }),
                  ValidationError);
}

TEST_CASE("loss properties on a grid") {
  for (double g : {0.05, 0.3, 0.5, 1.0}) {
    for (const MarginLoss& l : {MarginLoss::indicator(g), MarginLoss::truncated_hinge(g)}) {
      CHECK(l(0.0) == 1.0);
      CHECK(l(g) == 0.0);
      double prev = 1.0;
      for (int i = 0; i <= 4000; ++i) {
        const double t = -2.0 + i / 1000.0;
        const double v = l(t);
        CHECK(v <= prev);
        prev = v;
        CHECK(MarginLoss::zero_one()(t) <= v);
        CHECK(l(squash_value(t, g)) == v);
      }
    }
  }
  for (double g : {0.1, 0.4}) {
    const double wider = 2 * g;
    for (int i = 1; i < 100; ++i) {
      const double t = g * i / 100.0;
      CHECK(MarginLoss::indicator(g)(t) <= MarginLoss::indicator(wider)(t));
      CHECK(MarginLoss::truncated_hinge(g)(t) <= MarginLoss::truncated_hinge(wider)(t));
    }
  }
}

TEST_CASE("expected risk examples") {
  const VectorClass right = single(0.1, 0.9, 0.0);
  CHECK(expected_risk(right, 0, DiscreteDistribution({{0, 2, 1.0}}), MarginLoss::zero_one()) == 0.0);
  const VectorClass two({TabulatedClass(1.0, 2, {0.9, 0.5}), TabulatedClass(1.0, 2, {0.1, 0.5}),
                         TabulatedClass(1.0, 2, {0.0, 0.0})});
  CHECK(expected_risk(two, 0, DiscreteDistribution({{0, 1, 0.5}, {1, 1, 0.5}}), MarginLoss::zero_one()) == 0.5);
  CHECK_THROWS_AS(expected_risk(two, 0, DiscreteDistribution({{2, 1, 1.0}}), MarginLoss::zero_one()),
                  ValidationError);
}

TEST_CASE("zero-one risk matches the decision rule, margin losses dominate it") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 3 + rng.index(2), n = 1 + rng.index(4);
    const VectorClass g = random_vector_class(rng, 1 + rng.index(4), n, c);
    const DiscreteDistribution p = random_distribution(rng, n, c);
    const double gamma = rng.uniform(0.01, 1.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double zo = expected_risk(g, j, p, MarginLoss::zero_one());
      double correct = 0.0;
      for (const auto& a : p.atoms()) correct += a.p * (decision_rule(g, j, a.x) == std::optional<std::size_t>(a.y));
      CHECK(zo == doctest::Approx(1.0 - correct).epsilon(1e-12));
      CHECK(expected_risk(g, j, p, MarginLoss::indicator(gamma)) >= zo - 1e-15);
      CHECK(expected_risk(g, j, p, MarginLoss::truncated_hinge(gamma)) >= zo - 1e-15);
    }
  }
}

TEST_CASE("empirical risk") {
  const VectorClass right = single(0.0, 1.0, 0.0);
  LabeledSample s;
  s.points = {{0, 2}};
  CHECK(empirical_risk(right, 0, s, MarginLoss::indicator(0.5)) == 0.0);
  s.points = {};
  CHECK_THROWS_AS(empirical_risk(right, 0, s, MarginLoss::zero_one()), ValidationError);

  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t c = 3, n = 1 + rng.index(3);
    const VectorClass g = random_vector_class(rng, 2, n, c);
    LabeledSample sample;
    const std::size_t m = 1 + rng.index(8);
    for (std::size_t i = 0; i < m; ++i) sample.points.push_back({rng.index(n), 1 + rng.index(c)});
    // Empirical distribution of the sample, as atoms of mass 1/m.
    std::vector<Atom> atoms;
    for (const auto& z : sample.points) atoms.push_back({z.x, z.y, 1.0 / static_cast<double>(m)});
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) sum += atoms[i].p;
    atoms.back().p = 1.0 - sum;
    const DiscreteDistribution emp(atoms);
    const double gamma = rng.uniform(0.05, 1.0);
    for (const MarginLoss& l : {MarginLoss::zero_one(), MarginLoss::indicator(gamma), MarginLoss::truncated_hinge(gamma)})
      CHECK(empirical_risk(g, 0, sample, l) == doctest::Approx(expected_risk(g, 0, emp, l)).epsilon(1e-12));
    // Replacing margins by their squashed values leaves the hinge risk unchanged.
    const TabulatedClass f = margin_transform(g, sample), fs = squash(f, gamma);
    const MarginLoss h = MarginLoss::truncated_hinge(gamma);
    double raw = 0.0, squashed = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      raw += h(f(0, i));
      squashed += h(fs(0, i));
    }
    CHECK(raw == squashed);
  }
}
