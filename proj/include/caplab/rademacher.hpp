#pragma once

// Empirical Rademacher complexity: exact enumeration, Monte Carlo, and the
// finite-class (Massart) bound.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "caplab/fclass.hpp"

namespace caplab {

struct RademacherEstimate {
  enum Method { EXACT, MONTE_CARLO } method = EXACT;
  double value = 0.0;
  double std_error = 0.0;  // MONTE_CARLO only
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Largest point list accepted by rademacher_exact (2^20 sign vectors).
inline constexpr std::size_t kRademacherExactCap = 20;

/// E_sigma sup_f (1/n) sum_i sigma_i f(t_i) over all 2^n sign vectors.
RademacherEstimate rademacher_exact(const TabulatedClass& f, std::span<const std::size_t> pts,
                                    std::size_t cap = kRademacherExactCap);

/// Sample mean over `trials` sign vectors; trial i draws from derive_seed(seed, i).
RademacherEstimate rademacher_mc(const TabulatedClass& f, std::span<const std::size_t> pts,
                                 std::size_t trials, std::uint64_t seed);

/// (max ||a||_2 / n) sqrt(2 ln |A|), with |A| counting distinct vectors.
double massart_bound(const std::vector<std::vector<double>>& vectors);

}  // namespace caplab
