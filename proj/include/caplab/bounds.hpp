#pragma once

// Closed-form capacity and guaranteed-risk bounds with per-term breakdowns.
// Bounds that overflow doubles are carried as natural logarithms.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "caplab/capacity.hpp"
#include "caplab/fclass.hpp"
#include "caplab/metric.hpp"

namespace caplab {

struct BoundReport {
  std::string name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, double>> terms;
  /// Direct value; +inf when only the log is representable.
  double value = 0.0;
  /// Natural log of the value; meaningful when log_domain is set.
  double log_value = 0.0;
  bool log_domain = false;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<std::string> notes;

  double term(const std::string& key) const;
  /// True when count <= bound, compared in log domain when flagged.
  bool dominates(double count) const;
  /// True when count < bound.
  bool strictly_dominates(double count) const;
  nlohmann::ordered_json to_json() const;
};

/// Positive decreasing radii h(0..N).
class ChainSchedule {
 public:
  /// Requires N >= 1 and h strictly decreasing and positive, unless
  /// `degenerate` allows the all-zero schedule of a zero-diameter class.
  ChainSchedule(std::string name, std::vector<double> h, bool degenerate = false);

  /// h(j) = 2^{-j} diam.
  static ChainSchedule geometric_diam(double diam, std::size_t n);
  /// h(j) = 2^{-j} sqrt(C) gamma.
  static ChainSchedule geometric_c_gamma_root(std::size_t c, double gamma, std::size_t n);
  /// h(j) = gamma 2^{-2j}.
  static ChainSchedule t7_d1(double gamma, std::size_t n);
  /// h(j) = gamma C^{3/4} m^{-1/2} 2^{N-j}, N = ceil(log2(m/C)/2).
  static ChainSchedule t7_d2(double gamma, std::size_t c, std::size_t m);
  /// h(j) = gamma C^{1/2+1/d} m^{-1/d} 2^{(N-j) 2/(d-2)}, N = ceil((d-2)/(2d) log2(m/C)).
  static ChainSchedule t7_d3(double gamma, std::size_t c, std::size_t m, int d);

  const std::string& name() const { return name_; }
  std::size_t levels() const { return h_.size() - 1; }
  double operator()(std::size_t j) const { return h_.at(j); }
  const std::vector<double>& values() const { return h_; }
  bool degenerate() const { return degenerate_; }

 private:
  std::string name_;
  std::vector<double> h_;
  bool degenerate_;
};

/// Product over components of the proper covering number at eps / C^{1/p}
/// on the sample's points.
BoundReport decomposition_rhs(const VectorClass& g, const LabeledSample& sample, double eps,
                              PNorm p, const CapacityLimits& limits = {});

/// K = ceil((p+2) log2 ceil(112 M / eps)).
long long sauer_shelah_k(double eps, int p, double bound);
/// Packing bound in finite p with d = d(eps/45).
BoundReport sauer_shelah_lp(double eps, int p, double bound, double d);
/// Uniform-norm packing bound with d = d(eps/4) >= 1.
BoundReport sauer_shelah_linf(double eps, double bound, std::size_t n, double d);
/// L2 packing bound with d = d(eps/96).
BoundReport menver_l2(double eps, double bound, double d);

/// Guaranteed risk from a uniform-norm covering number of the squashed class.
BoundReport linf_basic_bound(double l_emp, double cov, std::size_t m, double delta);
/// Guaranteed risk with d = d(gamma/8); needs m > C.
BoundReport linf_final_bound(double l_emp, std::size_t c, std::size_t m, double gamma,
                             double bound, double delta, double d);
/// Guaranteed risk from a Rademacher complexity.
BoundReport l2_basic_bound(double l_emp, double rademacher, double gamma, std::size_t m,
                           double delta);

struct KmsMethod {
  bool exact = true;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};
/// C times the Rademacher complexity of the row union of the components.
BoundReport kms_rhs(const std::vector<TabulatedClass>& components, std::span<const std::size_t> pts,
                    const KmsMethod& method = {});

/// Chained multi-class Rademacher bound.
BoundReport chained_bound(const ChainSchedule& h, std::size_t c, std::size_t m, double bound,
                          double gamma, const DimOracle& d);

/// Closed form under a parametric dimension, regime chosen by d_G.
BoundReport hyp1_bound(int d, double k, std::size_t c, std::size_t m, double gamma, double bound);
/// F(C) = 2 sqrt(14 M / gamma) C^{1/4}.
double hyp1_f(std::size_t c, double bound, double gamma);

/// Chained entropy bound from exact proper L2 coverings; needs h(0) >= diam.
BoundReport dudley_bound(const TabulatedClass& f, std::span<const std::size_t> pts,
                         const ChainSchedule& h, const CapacityLimits& limits = {});
/// 12 times the entropy integral up to diam/2. With steps == 0 the integrand
/// is integrated exactly piece by piece between consecutive pairwise
/// distances; otherwise composite midpoint with `steps` cells.
BoundReport dudley_integral(const TabulatedClass& f, std::span<const std::size_t> pts,
                            std::size_t steps = 0, const CapacityLimits& limits = {});

/// Strict packing bound for grid-valued classes; d is the
/// (eps/2 - 3M/N)-dimension. Needs N >= 4, eps in (6M/N, 2M], d >= 1.
BoundReport combinatorial_ss(double eps, int p, double bound, std::size_t grid_n, std::size_t n,
                             double d);

}  // namespace caplab
