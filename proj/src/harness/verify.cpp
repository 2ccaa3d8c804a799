#include "caplab/harness/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "caplab/bounds.hpp"
#include "caplab/class_io.hpp"
#include "caplab/error.hpp"
#include "caplab/harness/csv.hpp"
#include "caplab/parallel.hpp"
#include "caplab/rademacher.hpp"
#include "caplab/risk.hpp"
#include "caplab/rng.hpp"

namespace caplab {

namespace {

using OJson = nlohmann::ordered_json;

struct Outcome {
  std::size_t passed = 0, failed = 0, skipped = 0;
  std::vector<OJson> failures;
  bool resource_skip = false;

  void check(bool ok, const std::function<OJson()>& describe) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      failures.push_back(describe());
    }
  }
};

using SuiteFn = std::function<void(Rng&, const VerifyConfig&, Outcome&)>;

// Draw in (lo, hi].
double open_closed(Rng& rng, double lo, double hi) { return hi - (hi - lo) * rng.uniform01(); }

// Random scalar class in [-1, 1]: uniform entries or a coarse grid that
// produces tied distances.
TabulatedClass random_class(Rng& rng, std::size_t max_rows, std::size_t max_n,
                            std::size_t min_rows = 1) {
  const auto rows = static_cast<std::size_t>(rng.between(static_cast<long long>(min_rows),
                                                         static_cast<long long>(max_rows)));
  const auto n = static_cast<std::size_t>(rng.between(1, static_cast<long long>(max_n)));
  const std::uint64_t s = rng.bits();
  switch (rng.index(3)) {
    case 0: return generate_uniform(rows, n, 1.0, s);
    case 1: return generate_grid(rows, n, CodomainGrid(1.0, static_cast<std::size_t>(rng.between(2, 4))), true, s);
    default: return generate_grid(rows, n, CodomainGrid(1.0, 8), true, s);
  }
}

PNorm random_norm(Rng& rng) {
  switch (rng.index(3)) {
    case 0: return PNorm(1);
    case 1: return PNorm(2);
    default: return PNorm::inf();
  }
}

std::vector<double> positive_distances(const TabulatedClass& f, PNorm p) {
  std::vector<double> out;
  for (double d : distance_matrix(f, all_points(f.ground_size()), p).distinct_distances())
    if (d > 0.0) out.push_back(d);
  return out;
}

// Half the time an actual pairwise distance (exercising the >= / < edges),
// otherwise uniform in (0, hi].
double pick_eps(Rng& rng, const std::vector<double>& distances, double hi) {
  if (!distances.empty() && rng.coin()) return distances[rng.index(distances.size())];
  return open_closed(rng, 0.0, hi);
}

CapacityQuery query(double eps, PNorm p, const VerifyConfig& c) {
  CapacityQuery q;
  q.eps = eps;
  q.p = p;
  q.strict_separation = c.mutant_strict_packing;
  return q;
}

std::size_t pack(const TabulatedClass& f, double eps, PNorm p, const VerifyConfig& c) {
  return packing_number(f, all_points(f.ground_size()), query(eps, p, c), c.limits).value;
}

std::size_t cover(const TabulatedClass& f, double eps, PNorm p, const VerifyConfig& c) {
  return covering_number(f, all_points(f.ground_size()), query(eps, p, c), c.limits).value;
}

OJson describe(const TabulatedClass& f, double eps, PNorm p) {
  OJson j;
  j["class"] = to_json(f);
  j["eps"] = eps;
  j["p"] = p.to_string();
  return j;
}

void kolmogorov(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 12, 6);
  for (PNorm p : {PNorm(1), PNorm(2), PNorm::inf()}) {
    const auto dists = positive_distances(f, p);
    const double hi = 1.1 * (dists.empty() ? 1.0 : dists.back());
    std::vector<double> eps;
    for (int k = 0; k < 2; ++k)
      eps.push_back(dists.empty() ? open_closed(rng, 0.0, hi) : dists[rng.index(dists.size())]);
    for (int k = 0; k < 3; ++k) eps.push_back(open_closed(rng, 0.0, hi));
    for (double e : eps) {
      const std::size_t cv = cover(f, e, p, c), pk = pack(f, e, p, c);
      out.check(cv <= pk, [&] {
        OJson j = describe(f, e, p);
        j["covering"] = cv;
        j["packing"] = pk;
        return j;
      });
    }
  }
}

void decomposition(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const std::size_t cats = rng.coin() ? 3 : 4;
  const auto n = static_cast<std::size_t>(rng.between(1, 5));
  std::vector<std::size_t> sizes;
  do {
    sizes.clear();
    for (std::size_t k = 0; k < cats; ++k) sizes.push_back(static_cast<std::size_t>(rng.between(1, 4)));
  } while (std::accumulate(sizes.begin(), sizes.end(), std::size_t{1}, std::multiplies<>()) > 64);
  std::vector<TabulatedClass> comps;
  for (std::size_t k = 0; k < cats; ++k) {
    const std::uint64_t s = rng.bits();
    comps.push_back(rng.coin() ? generate_uniform(sizes[k], n, 1.0, s)
                               : generate_grid(sizes[k], n, CodomainGrid(1.0, 4), true, s));
  }
  const VectorClass g = assemble_product(comps);
  LabeledSample sample;
  const auto m = static_cast<std::size_t>(rng.between(1, 5));
  for (std::size_t i = 0; i < m; ++i)
    sample.points.push_back({rng.index(n), 1 + rng.index(cats)});
  const double gamma = open_closed(rng, 0.1, 1.0);
  const TabulatedClass fg = margin_transform(g, sample);
  const TabulatedClass fgg = squash(fg, gamma);
  for (PNorm p : {PNorm(1), PNorm(2), PNorm::inf()}) {
    const double eps = pick_eps(rng, positive_distances(fg, p), 1.5);
    const BoundReport rhs = decomposition_rhs(g, sample, eps, p, c.limits);
    for (const TabulatedClass* f : {&fg, &fgg}) {
      const std::size_t lhs = cover(*f, eps, p, c);
      out.check(rhs.dominates(static_cast<double>(lhs)), [&] {
        OJson j;
        j["vector_class"] = to_json(g);
        OJson s = OJson::array();
        for (const auto& z : sample.points) s.push_back({z.x, z.y});
        j["sample"] = s;
        j["eps"] = eps;
        j["p"] = p.to_string();
        j["gamma"] = f == &fgg ? gamma : 0.0;
        j["covering"] = lhs;
        j["rhs"] = rhs.value;
        return j;
      });
    }
  }
}

void discretization_a4(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 10, 5);
  const int e = static_cast<int>(rng.between(1, 3));
  const PNorm p(e);
  std::vector<double> inside;
  for (double d : positive_distances(f, p))
    if (d <= 2.0 * f.bound()) inside.push_back(d);
  const double eps = pick_eps(rng, inside, 2.0 * f.bound());
  const double eta = eps * (1.0 - rng.uniform01()) * (1.0 - 1e-9);
  const double target = std::pow(std::pow(eps, e) - std::pow(eta, e), 1.0 / e) / 2.0;
  const std::size_t lhs = pack(f, eps, p, c);
  const std::size_t rhs = pack(discretize(f, eta), target, p, c);
  out.check(lhs <= rhs, [&] {
    OJson j = describe(f, eps, p);
    j["eta"] = eta;
    j["packing"] = lhs;
    j["discretized_packing"] = rhs;
    return j;
  });
}

void discretization_a5(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 10, 5);
  const double m = f.bound();
  const double u = open_closed(rng, 0.0, 1.0);
  const double eps = m * u * u;
  const double eta = 2.0 * eps * (1.0 - rng.uniform01()) * (1.0 - 1e-9);
  const TabulatedClass fd = discretize(f, eta);
  const std::vector<double> left = discretization_grid(m, eta);
  std::vector<double> shifted;
  for (double b : left) shifted.push_back(b + eta / 2.0 - m);
  const double gamma_r = eps - eta / 2.0;
  const FatShatterResult l = fat_shattering_dim(fd, eps, left, c.limits);
  const FatShatterResult r =
      fat_shattering_dim(f, gamma_r, default_witness_grid(f, gamma_r, shifted), c.limits);
  out.check(l.dim <= r.dim, [&] {
    OJson j;
    j["class"] = to_json(f);
    j["eps"] = eps;
    j["eta"] = eta;
    j["discretized_dim"] = l.dim;
    j["dim"] = r.dim;
    return j;
  });
  for (const auto* res : {&l, &r}) {
    if (!res->certificate) continue;
    const bool ok = replay_certificate(res == &l ? fd : f, *res->certificate);
    out.check(ok, [&] {
      OJson j;
      j["class"] = to_json(res == &l ? fd : f);
      j["replay_failed_gamma"] = res->certificate->gamma;
      return j;
    });
  }
}

void combinatorial_a6(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const auto grid_n = static_cast<std::size_t>(rng.between(4, 8));
  const double m = 1.0;
  const CodomainGrid grid(m, grid_n);
  const auto rows = static_cast<std::size_t>(rng.between(2, 12));
  const auto n = static_cast<std::size_t>(rng.between(1, 6));
  const TabulatedClass f = generate_grid(rows, n, grid, false, rng.bits());
  const int e = rng.coin() ? 1 : 2;
  const double eps = open_closed(rng, 6.0 * m / static_cast<double>(grid_n), 2.0 * m);
  const double gamma = eps / 2.0 - 3.0 * m / static_cast<double>(grid_n);
  const FatShatterResult d = fat_shattering_dim(f, gamma, grid.values(), c.limits);
  if (d.dim < 1) {
    ++out.skipped;
    return;
  }
  const BoundReport rhs = combinatorial_ss(eps, e, m, grid_n, n, static_cast<double>(d.dim));
  const std::size_t lhs = pack(f, eps, PNorm(e), c);
  out.check(rhs.strictly_dominates(static_cast<double>(lhs)), [&] {
    OJson j = describe(f, eps, PNorm(e));
    j["N"] = grid_n;
    j["dim"] = d.dim;
    j["packing"] = lhs;
    j["log_rhs"] = rhs.log_value;
    return j;
  });
}

void sauer_shelah_lp_suite(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 12, 6);
  for (int k = 0; k < 5; ++k) {
    const int e = k % 2 == 0 ? 1 : 2;
    const double eps = open_closed(rng, 0.0, 2.0 * f.bound());
    const auto d = fat_shattering_dim(f, eps / 45.0, c.limits).dim;
    const BoundReport rhs = sauer_shelah_lp(eps, e, f.bound(), static_cast<double>(d));
    const std::size_t lhs = pack(f, eps, PNorm(e), c);
    out.check(rhs.dominates(static_cast<double>(lhs)), [&] {
      OJson j = describe(f, eps, PNorm(e));
      j["dim"] = d;
      j["packing"] = lhs;
      j["log_rhs"] = rhs.log_value;
      return j;
    });
  }
}

void sauer_shelah_linf_suite(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 12, 6);
  for (int k = 0; k < 5; ++k) {
    const double eps = open_closed(rng, 0.0, 2.0 * f.bound());
    const auto d = fat_shattering_dim(f, eps / 4.0, c.limits).dim;
    const std::size_t lhs = pack(f, eps, PNorm::inf(), c);
    if (d == 0) {
      out.check(lhs == 1, [&] {
        OJson j = describe(f, eps, PNorm::inf());
        j["dim"] = 0;
        j["packing"] = lhs;
        return j;
      });
      continue;
    }
    const BoundReport rhs = sauer_shelah_linf(eps, f.bound(), f.ground_size(), static_cast<double>(d));
    out.check(rhs.dominates(static_cast<double>(lhs)), [&] {
      OJson j = describe(f, eps, PNorm::inf());
      j["dim"] = d;
      j["packing"] = lhs;
      j["log_rhs"] = rhs.log_value;
      return j;
    });
  }
}

void menver_l2_suite(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 12, 6);
  for (int k = 0; k < 5; ++k) {
    const double eps = open_closed(rng, 0.0, 2.0 * f.bound());
    const auto d = fat_shattering_dim(f, eps / 96.0, c.limits).dim;
    const BoundReport rhs = menver_l2(eps, f.bound(), static_cast<double>(d));
    const std::size_t lhs = pack(f, eps, PNorm(2), c);
    out.check(rhs.dominates(static_cast<double>(lhs)), [&] {
      OJson j = describe(f, eps, PNorm(2));
      j["dim"] = d;
      j["packing"] = lhs;
      j["log_rhs"] = rhs.log_value;
      return j;
    });
  }
}

void extraction(Rng& rng, const VerifyConfig& c, Outcome& out) {
  auto report = [](const TabulatedClass& f, double eps, double r) {
    OJson j;
    j["class"] = to_json(f);
    j["eps"] = eps;
    j["r"] = r;
    return j;
  };
  // Functions that differ on one coordinate only: r = 1 recovers it.
  {
    const auto n = static_cast<std::size_t>(rng.between(2, 6));
    const std::size_t star = rng.index(n);
    const int e = rng.coin() ? 1 : 2;
    std::vector<std::vector<double>> rows;
    const double base = rng.uniform(-0.5, 0.5);
    for (double v : {-1.0, 0.0, 1.0}) {
      std::vector<double> row(n, base);
      row[star] = v;
      rows.push_back(row);
    }
    const TabulatedClass f = TabulatedClass::from_rows(1.0, rows);
    const PointList pts = all_points(n);
    const double eps = std::pow(1.0 / static_cast<double>(n), 1.0 / e);
    const ExtractionResult res = extraction_search(f, pts, eps, PNorm(e), 1.0, c.limits);
    out.check(res.subvector && *res.subvector == PointList{star}, [&] { return report(f, eps, 1.0); });
  }
  // Two far-apart functions on 30 points satisfy the cardinality
  // precondition; the result then promises a separated subvector.
  {
    const std::size_t n = 30;
    std::vector<double> a(n), b(n);
    for (std::size_t t = 0; t < n; ++t) {
      a[t] = 0.5 - 0.02 * rng.uniform01();
      b[t] = -0.5 + 0.02 * rng.uniform01();
    }
    const TabulatedClass f = TabulatedClass::from_rows(0.5, {a, b});
    const PointList pts = all_points(n);
    const double eps = dist(f, 0, 1, pts, PNorm(1));
    const double r = static_cast<double>(rng.between(26, 30));
    const ExtractionResult res = extraction_search(f, pts, eps, PNorm(1), r, c.limits);
    if (!res.precondition) {
      ++out.skipped;
    } else {
      out.check(res.subvector && res.subvector->size() <= static_cast<std::size_t>(r),
                [&] { return report(f, eps, r); });
    }
  }
  // Separation spread over two coordinates: absent at r = 1, found at r = 2.
  {
    const TabulatedClass f = TabulatedClass::from_rows(1.0, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    const PointList pts = all_points(2);
    const auto one = extraction_search(f, pts, 0.5, PNorm(1), 1.0, c.limits);
    const auto two = extraction_search(f, pts, 0.5, PNorm(1), 2.0, c.limits);
    out.check(!one.subvector && two.subvector && two.subvector->size() == 2,
              [&] { return report(f, 0.5, 1.0); });
  }
}

void dudley(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const auto rows = static_cast<std::size_t>(rng.between(2, 10));
  const auto n = static_cast<std::size_t>(rng.between(1, 12));
  const std::uint64_t s = rng.bits();
  const TabulatedClass f = rng.coin() ? generate_uniform(rows, n, 1.0, s)
                                      : generate_grid(rows, n, CodomainGrid(1.0, 4), true, s);
  const PointList pts = all_points(n);
  const double r = rademacher_exact(f, pts).value;
  const double diam = distance_matrix(f, pts, PNorm(2)).diameter();
  const BoundReport integral = dudley_integral(f, pts, 0, c.limits);
  auto fail = [&](const char* which, double bound) {
    OJson j;
    j["class"] = to_json(f);
    j["bound"] = which;
    j["rademacher"] = r;
    j["value"] = bound;
    return j;
  };
  out.check(r <= integral.value, [&] { return fail("integral", integral.value); });
  for (std::size_t levels = 1; levels <= 5; ++levels) {
    const ChainSchedule h = ChainSchedule::geometric_diam(diam, levels);
    const BoundReport chain = dudley_bound(f, pts, h, c.limits);
    out.check(r <= chain.value, [&] { return fail("chain", chain.value); });
    const double ceiling = h(levels) + integral.value;
    out.check(chain.value <= ceiling * (1.0 + 1e-12) + 1e-15,
              [&] { return fail("chain_vs_integral", chain.value); });
  }
}

void chain_kms(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const std::size_t cats = rng.coin() ? 3 : 4;
  const auto rows = static_cast<std::size_t>(rng.between(2, 6));
  const auto n = static_cast<std::size_t>(rng.between(1, 6));
  std::vector<TabulatedClass> comps;
  for (std::size_t k = 0; k < cats; ++k) comps.push_back(generate_uniform(rows, n, 1.0, rng.bits()));
  const VectorClass g(comps);
  LabeledSample sample;
  const auto m = static_cast<std::size_t>(rng.between(2, 10));
  for (std::size_t i = 0; i < m; ++i) sample.points.push_back({rng.index(n), 1 + rng.index(cats)});
  const double gamma = open_closed(rng, 0.1, 1.0);
  const TabulatedClass fgg = squash(margin_transform(g, sample), gamma);
  const double r = rademacher_exact(fgg, all_points(m)).value;

  const auto levels = static_cast<std::size_t>(rng.between(1, 4));
  const ChainSchedule h = ChainSchedule::geometric_c_gamma_root(cats, gamma, levels);
  const DimOracle oracle = DimOracle::measured(comps, c.limits);
  const BoundReport chain = chained_bound(h, cats, m, g.bound(), gamma, oracle);
  const BoundReport kms = kms_rhs(comps, sample.xs());
  auto fail = [&](const char* which, double bound) {
    OJson j;
    j["vector_class"] = to_json(g);
    OJson s = OJson::array();
    for (const auto& z : sample.points) s.push_back({z.x, z.y});
    j["sample"] = s;
    j["gamma"] = gamma;
    j["bound"] = which;
    j["rademacher"] = r;
    j["value"] = bound;
    return j;
  };
  out.check(r <= chain.value, [&] { return fail("chained", chain.value); });
  out.check(r <= kms.value, [&] { return fail("kms", kms.value); });
}

void losses(Rng& rng, const VerifyConfig&, Outcome& out) {
  const double gamma = open_closed(rng, 0.0, 1.0);
  const double wider = gamma + (1.0 - gamma) * rng.uniform01();
  const MarginLoss zero_one = MarginLoss::zero_one();
  for (const MarginLoss& l : {MarginLoss::indicator(gamma), MarginLoss::truncated_hinge(gamma)}) {
    const MarginLoss lw = l.kind() == MarginLoss::INDICATOR ? MarginLoss::indicator(wider)
                                                            : MarginLoss::truncated_hinge(wider);
    auto fail = [&](const char* what, double t) {
      OJson j;
      j["loss"] = l.name();
      j["gamma"] = gamma;
      j["property"] = what;
      j["t"] = t;
      return j;
    };
    out.check(l(0.0) == 1.0, [&] { return fail("phi(0) = 1", 0.0); });
    out.check(l(gamma) == 0.0, [&] { return fail("phi(gamma) = 0", gamma); });
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = -1.5 + 3.0 * i / 200.0 + 0.01 * rng.uniform01();
      const double v = l(t);
      out.check(v >= 0.0 && v <= 1.0, [&] { return fail("range", t); });
      out.check(v <= prev, [&] { return fail("nonincreasing", t); });
      prev = v;
      out.check(zero_one(t) <= v, [&] { return fail("dominates zero-one", t); });
      out.check(l(squash_value(t, gamma)) == v, [&] { return fail("invariant under squashing", t); });
      if (t > 0.0 && t < gamma) out.check(v <= lw(t), [&] { return fail("monotone in gamma", t); });
    }
  }
}

void nesting(Rng& rng, const VerifyConfig& c, Outcome& out) {
  const TabulatedClass f = random_class(rng, 12, 6);
  const PNorm p = random_norm(rng);
  const auto dists = positive_distances(f, p);
  const double e1 = pick_eps(rng, dists, 2.0), e2 = e1 + open_closed(rng, 0.0, 1.0);
  const PointList pts = all_points(f.ground_size());
  CapacityQuery q = query(e1, p, c), q2 = query(e2, p, c);
  const auto pk1 = packing_number(f, pts, q, c.limits).value, pk2 = packing_number(f, pts, q2, c.limits).value;
  const auto cv1 = covering_number(f, pts, q, c.limits).value, cv2 = covering_number(f, pts, q2, c.limits).value;
  auto fail = [&](const char* what) {
    OJson j = describe(f, e1, p);
    j["property"] = what;
    return j;
  };
  out.check(pk1 >= pk2, [&] { return fail("packing nonincreasing in eps"); });
  out.check(cv1 >= cv2, [&] { return fail("covering nonincreasing in eps"); });
  q.mode = SolveMode::GREEDY;
  out.check(packing_number(f, pts, q, c.limits).value <= pk1, [&] { return fail("greedy packing <= exact"); });
  out.check(covering_number(f, pts, q, c.limits).value >= cv1, [&] { return fail("greedy covering >= exact"); });
  const double g1 = open_closed(rng, 0.0, 1.0), g2 = g1 + open_closed(rng, 0.0, 0.5);
  const auto d1 = fat_shattering_dim(f, g1, c.limits), d2 = fat_shattering_dim(f, g2, c.limits);
  out.check(d1.dim >= d2.dim, [&] { return fail("fat-shattering dimension nonincreasing"); });
  for (const auto* d : {&d1, &d2})
    if (d->certificate) out.check(replay_certificate(f, *d->certificate), [&] { return fail("certificate replay"); });
}

void massart(Rng& rng, const VerifyConfig&, Outcome& out) {
  const TabulatedClass f = random_class(rng, 8, 10);
  const double exact = rademacher_exact(f, all_points(f.ground_size())).value;
  const double bound = massart_bound(f.rows());
  out.check(exact <= bound, [&] {
    OJson j;
    j["class"] = to_json(f);
    j["rademacher"] = exact;
    j["massart"] = bound;
    return j;
  });
}

struct SuiteDef {
  std::string name;
  std::size_t instances;
  SuiteFn fn;
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> suites = {
      {"kolmogorov", 200, kolmogorov},
      {"decomposition", 100, decomposition},
      {"discretization_a4", 200, discretization_a4},
      {"discretization_a5", 200, discretization_a5},
      {"combinatorial_a6", 100, combinatorial_a6},
      {"sauer_shelah_lp", 200, sauer_shelah_lp_suite},
      {"sauer_shelah_linf", 200, sauer_shelah_linf_suite},
      {"menver_l2", 200, menver_l2_suite},
      {"extraction", 60, extraction},
      {"dudley", 50, dudley},
      {"chain_kms", 30, chain_kms},
      {"losses", 100, losses},
      {"nesting", 100, nesting},
      {"massart", 50, massart},
  };
  return suites;
}

const SuiteDef& find_suite(const std::string& name) {
  for (const auto& s : registry())
    if (s.name == name) return s;
  throw ValidationError("unknown suite '" + name + "'");
}

}  // namespace

nlohmann::json VerifyConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["suites"] = suites;
  j["instances"] = instances;
  j["limits"] = {{"exact_class_cap", limits.exact_class_cap},
                 {"multiset_cap", limits.multiset_cap},
                 {"fat_ground_cap", limits.fat_ground_cap},
                 {"fat_class_cap", limits.fat_class_cap},
                 {"extraction_cap", limits.extraction_cap},
                 {"memo_cap", limits.memo_cap}};
  j["mutant_strict_packing"] = mutant_strict_packing;
  return j;
}

void VerifyConfig::apply_caps(const nlohmann::json& caps) {
  if (!caps.is_object()) throw ValidationError("caps file must hold a JSON object");
  if (caps.contains("instances")) {
    const auto& inst = caps["instances"];
    if (!inst.is_object()) throw ValidationError("field 'instances': expected an object");
    for (auto it = inst.begin(); it != inst.end(); ++it) {
      find_suite(it.key());
      if (!it.value().is_number_unsigned() || it.value().get<std::size_t>() == 0)
        throw ValidationError("field 'instances." + it.key() + "': expected a positive integer");
      instances[it.key()] = it.value();
    }
  }
  if (caps.contains("limits")) {
    const auto& l = caps["limits"];
    auto set = [&](const char* key, std::size_t& slot) {
      if (!l.contains(key)) return;
      if (!l[key].is_number_unsigned() || l[key].get<std::size_t>() == 0)
        throw ValidationError(std::string("field 'limits.") + key + "': expected a positive integer");
      slot = l[key].get<std::size_t>();
    };
    set("exact_class_cap", limits.exact_class_cap);
    set("multiset_cap", limits.multiset_cap);
    set("fat_ground_cap", limits.fat_ground_cap);
    set("fat_class_cap", limits.fat_class_cap);
    set("extraction_cap", limits.extraction_cap);
    set("memo_cap", limits.memo_cap);
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
  }();
  return names;
}

std::size_t default_instances(const std::string& suite) { return find_suite(suite).instances; }

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  const SuiteDef& def = find_suite(name);
  std::size_t count = def.instances;
  if (config.instances.contains(name)) count = config.instances[name].get<std::size_t>();

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t stream = derive_seed(config.seed, fnv1a(name));
  std::vector<Outcome> outcomes(count);
  std::vector<std::string> errors(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(derive_seed(stream, i));
    try {
      def.fn(rng, config, outcomes[i]);
    } catch (const ResourceLimitError& e) {
      outcomes[i].resource_skip = true;
      errors[i] = e.what();
    }
  });

  SuiteResult r;
  r.name = name;
  r.instances = count;
  for (std::size_t i = 0; i < count; ++i) {
    const Outcome& o = outcomes[i];
    if (o.resource_skip) {
      ++r.skipped;
      if (r.notes.size() < 5) r.notes.push_back("instance " + std::to_string(i) + " skipped: " + errors[i]);
      continue;
    }
    r.passed += o.passed;
    r.failed += o.failed;
    r.skipped += o.skipped;
    for (const auto& f : o.failures) {
      if (r.counterexamples.size() >= 10) break;
      OJson j;
      j["instance"] = i;
      j["details"] = f;
      r.counterexamples.push_back(j);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool VerifyRun::ok() const {
  for (const auto& s : suites)
    if (s.failed) return false;
  return true;
}

VerifyRun run_verify(const VerifyConfig& config) {
  VerifyRun run;
  run.manifest.command = "verify";
  run.manifest.seed = config.seed;
  run.manifest.config_hash = config_hash(config.to_json());
  run.manifest.started = utc_timestamp();
  const std::vector<std::string> names = config.suites.empty() ? suite_names() : config.suites;
  for (const auto& n : names) find_suite(n);

  CsvWriter csv({"suite", "instances", "passed", "failed", "skipped"});
  OJson timings = OJson::object();
  OJson counter = OJson::object();
  for (const auto& n : names) {
    SuiteResult r = run_suite(n, config);
    csv.add_row({r.name, std::to_string(r.instances), std::to_string(r.passed), std::to_string(r.failed),
                 std::to_string(r.skipped)});
    run.manifest.checks.push_back({r.name, r.passed, r.failed, r.skipped});
    timings[r.name] = r.seconds;
    if (!r.counterexamples.empty()) counter[r.name] = r.counterexamples;
    run.suites.push_back(std::move(r));
  }
  run.manifest.details["seconds"] = timings;
  run.manifest.details["counterexamples"] = counter;
  run.manifest.finished = utc_timestamp();

  if (!config.out_dir.empty()) {
    write_text_file(config.out_dir + "/verify_results.csv", csv.text());
    run.manifest.outputs.push_back("verify_results.csv");
    for (const auto& s : run.suites) {
      for (const auto& ce : s.counterexamples) {
        const std::string file =
            "counterexamples/" + s.name + "_" + std::to_string(ce["instance"].get<std::size_t>()) + ".json";
        write_text_file(config.out_dir + "/" + file, ce["details"].dump(2) + "\n");
        run.manifest.outputs.push_back(file);
      }
    }
    run.manifest.write(config.out_dir);
  }
  return run;
}

}  // namespace caplab
