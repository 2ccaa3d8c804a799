#include "caplab/special.hpp"

#include <cmath>
#include <numbers>

namespace caplab {

namespace {

// 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!
double erf_series(double x) {
  const double x2 = x * x;
  double term = x, sum = x;
  for (int n = 1; n < 80; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
double erfc_fraction(double x) {
  const double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return -erf(-x);
  if (x <= 2.0) return erf_series(x);
  return 1.0 - erfc_fraction(x);
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x <= 2.0) return 1.0 - erf_series(x);
  return erfc_fraction(x);
}

}  // namespace caplab
