#include "caplab/fclass.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "caplab/error.hpp"
#include "caplab/rng.hpp"

namespace caplab {

PointList all_points(std::size_t n) {
  PointList pts(n);
  std::iota(pts.begin(), pts.end(), std::size_t{0});
  return pts;
}

TabulatedClass::TabulatedClass(double bound, std::size_t ground_size, std::vector<double> values)
    : bound_(bound), ground_size_(ground_size), values_(std::move(values)) {
  if (!(bound_ > 0.0) || !std::isfinite(bound_))
    throw ValidationError("class bound M must be a positive real");
  if (ground_size_ == 0) throw ValidationError("ground set must have at least one point");
  if (values_.empty()) throw ValidationError("class must contain at least one function");
  if (values_.size() % ground_size_ != 0)
    throw ValidationError("value matrix is not rectangular");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || std::fabs(v) > bound_) {
      throw ValidationError("entry (" + std::to_string(i / ground_size_) + ", " +
                            std::to_string(i % ground_size_) + ") = " + std::to_string(v) +
                            " violates |v| <= M = " + std::to_string(bound_));
    }
  }
}

TabulatedClass TabulatedClass::from_rows(double bound, const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("class must contain at least one function");
  const std::size_t n = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n)
      throw ValidationError("row " + std::to_string(r) + " has length " +
                            std::to_string(rows[r].size()) + ", expected " + std::to_string(n));
    values.insert(values.end(), rows[r].begin(), rows[r].end());
  }
  return TabulatedClass(bound, n, std::move(values));
}

std::vector<std::vector<double>> TabulatedClass::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(size());
  for (std::size_t f = 0; f < size(); ++f) out.emplace_back(row(f).begin(), row(f).end());
  return out;
}

TabulatedClass TabulatedClass::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * ground_size_);
  for (std::size_t r : rows) {
    if (r >= size()) throw ValidationError("row index out of range");
    values.insert(values.end(), row(r).begin(), row(r).end());
  }
  return TabulatedClass(bound_, ground_size_, std::move(values));
}

TabulatedClass TabulatedClass::restrict_to(std::span<const std::size_t> pts) const {
  if (pts.empty()) throw ValidationError("point list must be nonempty");
  std::vector<double> values;
  values.reserve(size() * pts.size());
  for (std::size_t f = 0; f < size(); ++f) {
    for (std::size_t t : pts) {
      if (t >= ground_size_) throw ValidationError("point index out of range");
      values.push_back((*this)(f, t));
    }
  }
  return TabulatedClass(bound_, pts.size(), std::move(values));
}

TabulatedClass TabulatedClass::deduplicated() const {
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < size(); ++f) {
    if (seen.emplace(row(f).begin(), row(f).end()).second) keep.push_back(f);
  }
  return select_rows(keep);
}

TabulatedClass TabulatedClass::union_with(const TabulatedClass& other) const {
  if (other.ground_size_ != ground_size_)
    throw ValidationError("union of classes over different ground sets");
  std::vector<double> values = values_;
  values.insert(values.end(), other.values_.begin(), other.values_.end());
  return TabulatedClass(std::max(bound_, other.bound_), ground_size_, std::move(values));
}

TabulatedClass TabulatedClass::with_bound(double bound) const {
  return TabulatedClass(bound, ground_size_, values_);
}

VectorClass::VectorClass(std::vector<TabulatedClass> components) : components_(std::move(components)) {
  if (components_.size() < 3)
    throw ValidationError("vector class needs C >= 3 categories, got " +
                          std::to_string(components_.size()));
  const auto& first = components_.front();
  if (first.bound() < 1.0) throw ValidationError("vector class bound M_G must be >= 1");
  for (std::size_t k = 1; k < components_.size(); ++k) {
    const auto& c = components_[k];
    if (c.ground_size() != first.ground_size() || c.bound() != first.bound() ||
        c.size() != first.size()) {
      throw ValidationError("component " + std::to_string(k + 1) +
                            " differs from component 1 in ground size, bound, or row count");
    }
  }
}

double VectorClass::margin(std::size_t j, std::size_t x, std::size_t y) const {
  const std::size_t c = categories();
  double best_other = -INFINITY;
  for (std::size_t l = 1; l <= c; ++l) {
    if (l != y) best_other = std::max(best_other, score(j, l, x));
  }
  return 0.5 * (score(j, y, x) - best_other);
}

VectorClass assemble_product(const std::vector<TabulatedClass>& components, std::size_t cap) {
  if (components.empty()) throw ValidationError("no components to assemble");
  std::size_t total = 1;
  for (const auto& c : components) {
    if (total > cap / c.size()) throw ResourceLimitError("product class exceeds cap of " +
                                                         std::to_string(cap) + " functions");
    total *= c.size();
  }
  double bound = 0.0;
  for (const auto& c : components) bound = std::max(bound, c.bound());

  const std::size_t n = components.front().ground_size();
  std::vector<std::vector<double>> values(components.size());
  std::vector<std::size_t> digit(components.size(), 0);
  for (std::size_t j = 0; j < total; ++j) {
    for (std::size_t k = 0; k < components.size(); ++k) {
      if (components[k].ground_size() != n)
        throw ValidationError("components over different ground sets");
      auto r = components[k].row(digit[k]);
      values[k].insert(values[k].end(), r.begin(), r.end());
    }
    for (std::size_t k = components.size(); k-- > 0;) {
      if (++digit[k] < components[k].size()) break;
      digit[k] = 0;
    }
  }
  std::vector<TabulatedClass> out;
  out.reserve(components.size());
  for (auto& v : values) out.emplace_back(bound, n, std::move(v));
  return VectorClass(std::move(out));
}

void LabeledSample::validate(std::size_t ground_size, std::size_t categories) const {
  if (points.empty()) throw ValidationError("labeled sample must be nonempty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].x >= ground_size)
      throw ValidationError("sample entry " + std::to_string(i) + ": point index " +
                            std::to_string(points[i].x) + " outside ground set");
    if (points[i].y < 1 || points[i].y > categories)
      throw ValidationError("sample entry " + std::to_string(i) + ": label " +
                            std::to_string(points[i].y) + " outside 1.." +
                            std::to_string(categories));
  }
}

PointList LabeledSample::xs() const {
  PointList out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.x);
  return out;
}

LabeledSample all_labeled_points(std::size_t ground_size, std::size_t categories) {
  LabeledSample s;
  for (std::size_t x = 0; x < ground_size; ++x)
    for (std::size_t k = 1; k <= categories; ++k) s.points.push_back({x, k});
  return s;
}

CodomainGrid::CodomainGrid(double half_range, std::size_t steps) : half_range(half_range), steps(steps) {
  if (!(half_range > 0.0)) throw ValidationError("grid half-range M must be positive");
  if (steps == 0) throw ValidationError("grid resolution N must be positive");
}

double CodomainGrid::value(std::size_t j, bool shifted) const {
  const double v = 2.0 * half_range * static_cast<double>(j) / static_cast<double>(steps);
  return shifted ? v - half_range : v;
}

std::vector<double> CodomainGrid::values(bool shifted) const {
  std::vector<double> out;
  for (std::size_t j = 0; j <= steps; ++j) out.push_back(value(j, shifted));
  return out;
}

TabulatedClass margin_transform(const VectorClass& g, const LabeledSample& sample) {
  sample.validate(g.ground_size(), g.categories());
  std::vector<double> values;
  values.reserve(g.size() * sample.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (const auto& z : sample.points) values.push_back(g.margin(j, z.x, z.y));
  return TabulatedClass(g.bound(), sample.size(), std::move(values));
}

double squash_value(double t, double gamma) {
  if (t <= 0.0) return 0.0;
  return t <= gamma ? t : gamma;
}

TabulatedClass squash(const TabulatedClass& f, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("squashing needs gamma in (0, 1]");
  std::vector<double> values = f.values();
  for (double& v : values) v = squash_value(v, gamma);
  return TabulatedClass(gamma, f.ground_size(), std::move(values));
}

double discretize_value(double v, double bound, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("discretization step eta must be positive");
  const double shifted = v + bound;
  double k = std::floor(shifted / eta);
  while (k > 0.0 && k * eta > shifted) k -= 1.0;
  while ((k + 1.0) * eta <= shifted) k += 1.0;
  return k * eta;
}

TabulatedClass discretize(const TabulatedClass& f, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("discretization step eta must be positive");
  std::vector<double> values = f.values();
  for (double& v : values) v = discretize_value(v, f.bound(), eta);
  return TabulatedClass(2.0 * f.bound(), f.ground_size(), std::move(values));
}

std::vector<double> discretization_grid(double bound, double eta) {
  if (!(eta > 0.0)) throw ValidationError("discretization step eta must be positive");
  std::vector<double> out;
  for (double k = 0.0; k * eta <= 2.0 * bound; k += 1.0) out.push_back(k * eta);
  return out;
}

TabulatedClass generate_uniform(std::size_t rows, std::size_t ground_size, double bound,
                                std::uint64_t seed) {
  if (rows == 0 || ground_size == 0) throw ValidationError("generator needs rows >= 1 and n >= 1");
  Rng rng(seed);
  std::vector<double> values(rows * ground_size);
  for (double& v : values) v = std::clamp(rng.uniform(-bound, bound), -bound, bound);
  return TabulatedClass(bound, ground_size, std::move(values));
}

TabulatedClass generate_grid(std::size_t rows, std::size_t ground_size, const CodomainGrid& grid,
                             bool shifted, std::uint64_t seed) {
  if (rows == 0 || ground_size == 0) throw ValidationError("generator needs rows >= 1 and n >= 1");
  Rng rng(seed);
  std::vector<double> values(rows * ground_size);
  for (double& v : values) v = grid.value(rng.index(grid.steps + 1), shifted);
  const double bound = shifted ? grid.half_range : 2.0 * grid.half_range;
  return TabulatedClass(bound, ground_size, std::move(values));
}

TabulatedClass enumerate_all_functions(std::size_t ground_size, const CodomainGrid& grid,
                                       bool shifted, std::size_t cap) {
  if (ground_size == 0) throw ValidationError("ground set must have at least one point");
  const std::size_t base = grid.steps + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < ground_size; ++i) {
    if (total > cap / base)
      throw ResourceLimitError("all-functions enumeration: (N+1)^n exceeds cap of " +
                               std::to_string(cap));
    total *= base;
  }
  std::vector<double> values;
  values.reserve(total * ground_size);
  std::vector<std::size_t> digit(ground_size, 0);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t t = 0; t < ground_size; ++t) values.push_back(grid.value(digit[t], shifted));
    for (std::size_t t = ground_size; t-- > 0;) {
      if (++digit[t] < base) break;
      digit[t] = 0;
    }
  }
  const double bound = shifted ? grid.half_range : 2.0 * grid.half_range;
  return TabulatedClass(bound, ground_size, std::move(values));
}

}  // namespace caplab
