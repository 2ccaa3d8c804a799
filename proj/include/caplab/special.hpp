#pragma once

namespace caplab {

/// Error function. |x| <= 2: e^{-x^2}-weighted all-positive Taylor series
/// (at most 80 terms); beyond: 1 - erfc(x).
double erf(double x);
/// Complementary error function. x > 2: Lentz continued fraction (at most
/// 500 terms, typically under 100); otherwise 1 - erf(x).
double erfc(double x);

}  // namespace caplab
