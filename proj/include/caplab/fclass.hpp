#pragma once

// Finite tabulated function classes. A class is a value matrix over an
// index-only ground set: one row per function, one column per point.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace caplab {

/// Point multiset: indices into a ground set, repetitions allowed.
using PointList = std::vector<std::size_t>;

/// Returns {0, 1, ..., n-1}.
PointList all_points(std::size_t n);

class TabulatedClass {
 public:
  /// `values` is row-major with `ground_size` columns. Throws ValidationError
  /// unless bound > 0, ground_size >= 1, at least one row, every |v| <= bound.
  TabulatedClass(double bound, std::size_t ground_size, std::vector<double> values);

  static TabulatedClass from_rows(double bound, const std::vector<std::vector<double>>& rows);

  double bound() const { return bound_; }
  std::size_t size() const { return values_.size() / ground_size_; }
  std::size_t ground_size() const { return ground_size_; }

  double operator()(std::size_t f, std::size_t t) const { return values_[f * ground_size_ + t]; }
  std::span<const double> row(std::size_t f) const {
    return {values_.data() + f * ground_size_, ground_size_};
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<std::vector<double>> rows() const;

  /// Keeps only the listed rows, in the listed order.
  TabulatedClass select_rows(std::span<const std::size_t> rows) const;
  /// New class over the point list: column i is the old column pts[i].
  TabulatedClass restrict_to(std::span<const std::size_t> pts) const;
  /// Drops repeated rows, keeping first occurrences in order.
  TabulatedClass deduplicated() const;
  /// Row union with another class over the same ground set; bound is the max.
  TabulatedClass union_with(const TabulatedClass& other) const;
  TabulatedClass with_bound(double bound) const;

  friend bool operator==(const TabulatedClass&, const TabulatedClass&) = default;

 private:
  double bound_;
  std::size_t ground_size_;
  std::vector<double> values_;
};

/// C component classes evaluated jointly: function j of the vector class is
/// row j of every component.
class VectorClass {
 public:
  /// Requires C >= 3, bound >= 1, and every component sharing ground size,
  /// bound, and row count.
  explicit VectorClass(std::vector<TabulatedClass> components);

  std::size_t categories() const { return components_.size(); }
  std::size_t size() const { return components_.front().size(); }
  std::size_t ground_size() const { return components_.front().ground_size(); }
  double bound() const { return components_.front().bound(); }

  /// Component k is 1-based, matching category labels.
  const TabulatedClass& component(std::size_t k) const { return components_.at(k - 1); }
  const std::vector<TabulatedClass>& components() const { return components_; }

  /// g_{j,k}(x) with 1-based k.
  double score(std::size_t j, std::size_t k, std::size_t x) const { return components_[k - 1](j, x); }

  /// f_g(x, y) = (g_y(x) - max_{l != y} g_l(x)) / 2.
  double margin(std::size_t j, std::size_t x, std::size_t y) const;

  friend bool operator==(const VectorClass&, const VectorClass&) = default;

 private:
  std::vector<TabulatedClass> components_;
};

/// All |G_1| x ... x |G_C| combinations of component rows, rows enumerated
/// with the last component varying fastest. Throws ResourceLimitError when
/// the product exceeds `cap`.
VectorClass assemble_product(const std::vector<TabulatedClass>& components,
                             std::size_t cap = 4096);

struct LabeledPoint {
  std::size_t x;
  std::size_t y;  // 1..C
  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct LabeledSample {
  std::vector<LabeledPoint> points;

  std::size_t size() const { return points.size(); }
  /// Throws ValidationError unless nonempty with x < ground_size and y in 1..C.
  void validate(std::size_t ground_size, std::size_t categories) const;
  PointList xs() const;
};

/// Every (x, k) pair of the ground set, x-major.
LabeledSample all_labeled_points(std::size_t ground_size, std::size_t categories);

/// {2M j / N : 0 <= j <= N}, optionally shifted by -M onto [-M, M].
struct CodomainGrid {
  double half_range;  // M
  std::size_t steps;  // N

  CodomainGrid(double half_range, std::size_t steps);
  std::vector<double> values(bool shifted = false) const;
  double value(std::size_t j, bool shifted = false) const;
};

/// Margin class F_G on a labeled sample: entry (j, i) = f_{g_j}(x_i, y_i).
TabulatedClass margin_transform(const VectorClass& g, const LabeledSample& sample);

/// Piecewise-linear squashing pi_gamma(t): 0 for t <= 0, t on (0, gamma], gamma above.
double squash_value(double t, double gamma);
/// Entrywise pi_gamma; the output bound is gamma. Requires 0 < gamma <= 1.
TabulatedClass squash(const TabulatedClass& f, double gamma);

/// eta * floor((v + M) / eta), corrected so that out <= v + M < out + eta
/// holds for the computed doubles.
double discretize_value(double v, double bound, double eta);
/// Entrywise eta-discretization onto [0, 2M]. Rows are kept one-for-one,
/// duplicates included; the output bound is 2M.
TabulatedClass discretize(const TabulatedClass& f, double eta);
/// {eta * j : 0 <= j, eta * j <= 2M}: the codomain of discretize().
std::vector<double> discretization_grid(double bound, double eta);

// Generators. All are deterministic in (arguments, seed).

TabulatedClass generate_uniform(std::size_t rows, std::size_t ground_size, double bound,
                                std::uint64_t seed);
/// Entries drawn uniformly from the grid. Unshifted classes live in [0, 2M]
/// and carry bound 2M; shifted ones live in [-M, M] with bound M.
TabulatedClass generate_grid(std::size_t rows, std::size_t ground_size, const CodomainGrid& grid,
                             bool shifted, std::uint64_t seed);
/// Every function from the ground set into the grid, (N+1)^n rows in
/// lexicographic order. Throws ResourceLimitError above `cap` rows.
TabulatedClass enumerate_all_functions(std::size_t ground_size, const CodomainGrid& grid,
                                       bool shifted, std::size_t cap = 1u << 16);

}  // namespace caplab
