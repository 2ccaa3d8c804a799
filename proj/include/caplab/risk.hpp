#pragma once

// Decision rule, margin losses, and exact risks under finite distributions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caplab/fclass.hpp"

namespace caplab {

/// Argmax category (1-based), or nullopt when the maximum is tied.
std::optional<std::size_t> decision_rule(const VectorClass& g, std::size_t j, std::size_t x);

class MarginLoss {
 public:
  enum Kind { ZERO_ONE, INDICATOR, TRUNCATED_HINGE, CUSTOM };

  static MarginLoss zero_one() { return MarginLoss(ZERO_ONE, 1.0); }
  /// 1{t < gamma}.
  static MarginLoss indicator(double gamma);
  /// 1{t <= 0} + (1 - t/gamma) 1{t in (0, gamma]}.
  static MarginLoss truncated_hinge(double gamma);
  /// A user loss, accepted only if it maps into [0, 1], is nonincreasing, and
  /// has phi(0) = 1 and phi(gamma) = 0, all checked on a grid over [-2, 2].
  static MarginLoss custom(std::string name, double gamma, std::function<double(double)> phi);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  std::string name() const;
  double operator()(double t) const;

 private:
  MarginLoss(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  Kind kind_;
  double gamma_;
  std::string name_;
  std::function<double(double)> phi_;
};

struct Atom {
  std::size_t x;
  std::size_t y;
  double p;
};

/// Probability table over (point, label) pairs.
class DiscreteDistribution {
 public:
  /// Requires nonnegative masses summing to 1 within 1e-12.
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  /// Throws ValidationError unless every atom lies in ground x 1..C.
  void validate(std::size_t ground_size, std::size_t categories) const;
  /// i.i.d. sample of size m by inverse CDF over the atom order.
  LabeledSample sample(std::size_t m, std::uint64_t seed) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
};

/// Sum over atoms of P(z) * loss(f_g(z)).
double expected_risk(const VectorClass& g, std::size_t j, const DiscreteDistribution& p,
                     const MarginLoss& loss);
/// (1/m) sum_i loss(f_g(z_i)).
double empirical_risk(const VectorClass& g, std::size_t j, const LabeledSample& sample,
                      const MarginLoss& loss);

}  // namespace caplab
