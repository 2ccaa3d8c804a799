#pragma once

// Empirical L_p pseudo-distances under the counting measure on a point list.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "caplab/fclass.hpp"

namespace caplab {

/// Finite p >= 1, or the uniform norm.
class PNorm {
 public:
  static constexpr int kInf = 0;

  explicit PNorm(int p);
  static PNorm inf() { return PNorm(); }
  /// Accepts "1", "2", ..., "inf".
  static PNorm parse(const std::string& text);

  bool is_inf() const { return p_ == kInf; }
  /// Finite exponent; throws ValidationError for the uniform norm.
  int exponent() const;
  std::string to_string() const;

  friend bool operator==(PNorm, PNorm) = default;

 private:
  PNorm() : p_(kInf) {}
  int p_;
};

/// d_p between two value rows over the listed positions of the ground set.
double dist(std::span<const double> a, std::span<const double> b, std::span<const std::size_t> pts,
            PNorm p);
double dist(const TabulatedClass& f, std::size_t i, std::size_t j, std::span<const std::size_t> pts,
            PNorm p);

/// Symmetric pairwise distance table over the functions of a class.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t count, std::vector<double> entries, PNorm p, PointList pts);

  std::size_t size() const { return count_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * count_ + j]; }
  PNorm norm() const { return p_; }
  const PointList& points() const { return pts_; }

  /// Largest pairwise distance.
  double diameter() const;
  /// Sorted distinct off-diagonal values.
  std::vector<double> distinct_distances() const;
  /// Zero diagonal, symmetry, and triangle inequality within `tol`.
  bool satisfies_metric_axioms(double tol = 1e-12) const;

 private:
  std::size_t count_;
  std::vector<double> entries_;
  PNorm p_;
  PointList pts_;
};

DistanceMatrix distance_matrix(const TabulatedClass& f, std::span<const std::size_t> pts, PNorm p);

/// Debug dump of a threshold graph, one "i j dist" line per edge. With
/// `separation` the edges are pairs at distance >= eps, otherwise pairs at
/// distance < eps.
void write_threshold_graph(std::ostream& out, const DistanceMatrix& d, double eps, bool separation);

}  // namespace caplab
