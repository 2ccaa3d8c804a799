#include "caplab/risk.hpp"

#include <algorithm>
#include <cmath>

#include "caplab/error.hpp"
#include "caplab/rng.hpp"

namespace caplab {

std::optional<std::size_t> decision_rule(const VectorClass& g, std::size_t j, std::size_t x) {
  if (j >= g.size() || x >= g.ground_size()) throw ValidationError("index out of range");
  std::size_t arg = 1;
  bool tied = false;
  for (std::size_t k = 2; k <= g.categories(); ++k) {
    const double v = g.score(j, k, x), best = g.score(j, arg, x);
    if (v > best) {
      arg = k;
      tied = false;
    } else if (v == best) {
      tied = true;
    }
  }
  if (tied) return std::nullopt;
  return arg;
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("margin loss needs gamma in (0, 1]");
}

}  // namespace

MarginLoss MarginLoss::indicator(double gamma) {
  check_gamma(gamma);
  return MarginLoss(INDICATOR, gamma);
}

MarginLoss MarginLoss::truncated_hinge(double gamma) {
  check_gamma(gamma);
  return MarginLoss(TRUNCATED_HINGE, gamma);
}

MarginLoss MarginLoss::custom(std::string name, double gamma, std::function<double(double)> phi) {
  check_gamma(gamma);
  if (!phi) throw ValidationError("custom loss needs a function");
  if (phi(0.0) != 1.0) throw ValidationError("custom loss '" + name + "': phi(0) must equal 1");
  if (phi(gamma) != 0.0) throw ValidationError("custom loss '" + name + "': phi(gamma) must equal 0");
  double prev = INFINITY;
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i) {
    const double t = -2.0 + 4.0 * i / steps;
    const double v = phi(t);
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("custom loss '" + name + "': value outside [0, 1] at t = " + std::to_string(t));
    if (v > prev)
      throw ValidationError("custom loss '" + name + "': increases near t = " + std::to_string(t));
    prev = v;
  }
  MarginLoss l(CUSTOM, gamma);
  l.name_ = std::move(name);
  l.phi_ = std::move(phi);
  return l;
}

std::string MarginLoss::name() const {
  switch (kind_) {
    case ZERO_ONE: return "zero_one";
    case INDICATOR: return "indicator";
    case TRUNCATED_HINGE: return "truncated_hinge";
    case CUSTOM: return name_;
  }
  return {};
}

double MarginLoss::operator()(double t) const {
  switch (kind_) {
    case ZERO_ONE: return t <= 0.0 ? 1.0 : 0.0;
    case INDICATOR: return t < gamma_ ? 1.0 : 0.0;
    case TRUNCATED_HINGE:
      if (t <= 0.0) return 1.0;
      return t <= gamma_ ? 1.0 - t / gamma_ : 0.0;
    case CUSTOM: return phi_(t);
  }
  return 0.0;
}

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("distribution needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double p = atoms_[i].p;
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ValidationError("atom " + std::to_string(i) + ": probability must be nonnegative");
    total += p;
    cdf_.push_back(total);
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw ValidationError("atom probabilities sum to " + std::to_string(total) + ", not 1");
}

void DiscreteDistribution::validate(std::size_t ground_size, std::size_t categories) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].x >= ground_size)
      throw ValidationError("atom " + std::to_string(i) + ": point " + std::to_string(atoms_[i].x) +
                            " outside ground set");
    if (atoms_[i].y < 1 || atoms_[i].y > categories)
      throw ValidationError("atom " + std::to_string(i) + ": label " + std::to_string(atoms_[i].y) +
                            " outside 1.." + std::to_string(categories));
  }
}

LabeledSample DiscreteDistribution::sample(std::size_t m, std::uint64_t seed) const {
  if (m == 0) throw ValidationError("sample size must be positive");
  Rng rng(seed);
  LabeledSample s;
  s.points.reserve(m);
  const double total = cdf_.back();
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    if (k >= atoms_.size()) k = atoms_.size() - 1;
    while (atoms_[k].p == 0.0 && k > 0) --k;
    s.points.push_back({atoms_[k].x, atoms_[k].y});
  }
  return s;
}

double expected_risk(const VectorClass& g, std::size_t j, const DiscreteDistribution& p,
                     const MarginLoss& loss) {
  p.validate(g.ground_size(), g.categories());
  if (j >= g.size()) throw ValidationError("function index out of range");
  double r = 0.0;
  for (const Atom& a : p.atoms()) r += a.p * loss(g.margin(j, a.x, a.y));
  return r;
}

double empirical_risk(const VectorClass& g, std::size_t j, const LabeledSample& sample,
                      const MarginLoss& loss) {
  sample.validate(g.ground_size(), g.categories());
  if (j >= g.size()) throw ValidationError("function index out of range");
  double r = 0.0;
  for (const auto& z : sample.points) r += loss(g.margin(j, z.x, z.y));
  return r / static_cast<double>(sample.size());
}

}  // namespace caplab
