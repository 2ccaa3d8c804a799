#include "caplab/rademacher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "caplab/error.hpp"
#include "caplab/parallel.hpp"
#include "caplab/rng.hpp"

namespace caplab {

namespace {

void check(const TabulatedClass& f, std::span<const std::size_t> pts) {
  if (pts.empty()) throw ValidationError("point list must be nonempty");
  for (std::size_t t : pts)
    if (t >= f.ground_size()) throw ValidationError("point index outside ground set");
}

}  // namespace

RademacherEstimate rademacher_exact(const TabulatedClass& f, std::span<const std::size_t> pts,
                                    std::size_t cap) {
  check(f, pts);
  const std::size_t n = pts.size();
  if (n > cap)
    throw ResourceLimitError("exact Rademacher enumeration limited to " + std::to_string(cap) +
                             " points; use Monte Carlo");
  const std::size_t rows = f.size();
  bool constant = true;
  for (std::size_t j = 1; j < rows && constant; ++j)
    for (std::size_t t : pts)
      if (f(j, t) != f(0, t)) {
        constant = false;
        break;
      }
  if (constant) return {};  // E[sigma] = 0 exactly

  // Gray-code walk: one coordinate flips per step, so each correlation
  // updates in O(rows).
  std::vector<double> corr(rows, 0.0);
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t t : pts) corr[j] -= f(j, t);
  const std::uint64_t total = std::uint64_t{1} << n;
  double sum = 0.0;
  for (std::uint64_t s = 0;; ++s) {
    sum += *std::max_element(corr.begin(), corr.end());
    if (s + 1 == total) break;
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(s + 1));
    const std::uint64_t gray_next = (s + 1) ^ ((s + 1) >> 1);
    const double sign = (gray_next >> k) & 1u ? 2.0 : -2.0;
    for (std::size_t j = 0; j < rows; ++j) corr[j] += sign * f(j, pts[k]);
  }
  RademacherEstimate out;
  out.method = RademacherEstimate::EXACT;
  out.value = sum / static_cast<double>(total) / static_cast<double>(n);
  return out;
}

RademacherEstimate rademacher_mc(const TabulatedClass& f, std::span<const std::size_t> pts,
                                 std::size_t trials, std::uint64_t seed) {
  check(f, pts);
  if (trials == 0) throw ValidationError("Monte Carlo needs trials >= 1");
  const std::size_t n = pts.size();
  std::vector<double> draws(trials);
  const std::size_t chunk = 4096;
  const std::size_t chunks = (trials + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> sigma(n);
    for (std::size_t i = c * chunk; i < std::min(trials, (c + 1) * chunk); ++i) {
      Rng rng(derive_seed(seed, i));
      for (auto& s : sigma) s = rng.coin() ? 1.0 : -1.0;
      double best = -INFINITY;
      for (std::size_t j = 0; j < f.size(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += sigma[k] * f(j, pts[k]);
        best = std::max(best, acc);
      }
      draws[i] = best / static_cast<double>(n);
    }
  });
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(trials);
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  RademacherEstimate out;
  out.method = RademacherEstimate::MONTE_CARLO;
  out.value = mean;
  out.trials = trials;
  out.seed = seed;
  out.std_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) /
                                   std::sqrt(static_cast<double>(trials))
                             : 0.0;
  return out;
}

double massart_bound(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw ValidationError("Massart bound needs a nonempty vector set");
  const std::size_t n = vectors.front().size();
  if (n == 0) throw ValidationError("vectors must have positive length");
  double max_norm = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != n) throw ValidationError("vectors differ in length");
    double s = 0.0;
    for (double x : v) s += x * x;
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  const std::set<std::vector<double>> distinct(vectors.begin(), vectors.end());
  if (distinct.size() == 1) return 0.0;
  return max_norm / static_cast<double>(n) *
         std::sqrt(2.0 * std::log(static_cast<double>(distinct.size())));
}

}  // namespace caplab
