#include <doctest.h>

#include <cmath>
#include <sstream>

#include "caplab/error.hpp"
#include "caplab/metric.hpp"
#include "caplab/rng.hpp"

using namespace caplab;

TEST_CASE("distance examples") {
  const TabulatedClass f = TabulatedClass::from_rows(1.0, {{0.0, 0.0}, {0.3, 0.4}});
  const PointList pts = all_points(2);
  CHECK(dist(f, 0, 1, pts, PNorm(2)) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
  CHECK(dist(f, 0, 1, pts, PNorm::inf()) == 0.4);
  CHECK(dist(f, 0, 1, pts, PNorm(1)) == doctest::Approx(0.35));
  CHECK(dist(f, 1, 1, pts, PNorm(3)) == 0.0);
  CHECK_THROWS_AS(dist(f, 0, 1, PointList{}, PNorm(1)), ValidationError);
  CHECK_THROWS_AS(dist(f, 0, 1, PointList{2}, PNorm(1)), ValidationError);
}

TEST_CASE("norm parsing") {
  CHECK(PNorm::parse("inf").is_inf());
  CHECK(PNorm::parse("3").exponent() == 3);
  CHECK(PNorm::parse("2").to_string() == "2");
  CHECK(PNorm::inf().to_string() == "inf");
  CHECK_THROWS_AS(PNorm::parse("0"), ValidationError);
  CHECK_THROWS_AS(PNorm::parse("x"), ValidationError);
  CHECK_THROWS_AS(PNorm(0), ValidationError);
  CHECK_THROWS_AS(PNorm::inf().exponent(), ValidationError);
}

TEST_CASE("distance matrix examples") {
  const TabulatedClass c = TabulatedClass::from_rows(1.0, {{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}});
  const DistanceMatrix d = distance_matrix(c, all_points(2), PNorm(1));
  CHECK(d(0, 1) == 0.5);
  CHECK(d(1, 2) == 0.5);
  CHECK(d(0, 2) == 1.0);
  CHECK(d.diameter() == 1.0);
  CHECK(d.distinct_distances() == std::vector<double>{0.5, 1.0});
  const DistanceMatrix one = distance_matrix(TabulatedClass(1.0, 3, {0.1, 0.2, 0.3}), all_points(3), PNorm(2));
  CHECK(one.size() == 1);
  CHECK(one(0, 0) == 0.0);
  CHECK(one.diameter() == 0.0);
  CHECK(one.distinct_distances().empty());
}

TEST_CASE("matrix agrees with pairwise distances and satisfies the axioms") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const TabulatedClass f = generate_uniform(1 + rng.index(8), 1 + rng.index(6), 1.0, rng.bits());
    const PointList pts = all_points(f.ground_size());
    for (PNorm p : {PNorm(1), PNorm(2), PNorm(3), PNorm::inf()}) {
      const DistanceMatrix d = distance_matrix(f, pts, p);
      CHECK(d.satisfies_metric_axioms());
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) CHECK(d(i, j) == dist(f, i, j, pts, p));
    }
  }
}

TEST_CASE("distances grow with p") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const TabulatedClass f = generate_uniform(2, 1 + rng.index(8), 1.0, rng.bits());
    const PointList pts = all_points(f.ground_size());
    double prev = 0.0;
    for (PNorm p : {PNorm(1), PNorm(2), PNorm(3), PNorm(5), PNorm::inf()}) {
      const double v = dist(f, 0, 1, pts, p);
      CHECK(v >= prev * (1.0 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("repeating every point leaves distances unchanged") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const TabulatedClass f = generate_uniform(2, 1 + rng.index(6), 1.0, rng.bits());
    const PointList base = all_points(f.ground_size());
    PointList rep;
    const std::size_t k = 2 + rng.index(3);
    for (std::size_t r = 0; r < k; ++r) rep.insert(rep.end(), base.begin(), base.end());
    for (PNorm p : {PNorm(1), PNorm(2), PNorm::inf()})
      CHECK(dist(f, 0, 1, rep, p) == doctest::Approx(dist(f, 0, 1, base, p)).epsilon(1e-13));
  }
}

TEST_CASE("threshold graph dump") {
  const TabulatedClass c = TabulatedClass::from_rows(1.0, {{0.0}, {0.5}, {1.0}});
  const DistanceMatrix d = distance_matrix(c, all_points(1), PNorm(1));
  std::ostringstream sep, cov;
  write_threshold_graph(sep, d, 0.6, true);
  write_threshold_graph(cov, d, 0.6, false);
  CHECK(sep.str() == "0 2 1\n");
  CHECK(cov.str() == "0 1 0.5\n1 2 0.5\n");
}
