#pragma once

// Covering, packing, uniform capacity, fat-shattering dimension, and the
// separated-subvector extraction search.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "caplab/fclass.hpp"
#include "caplab/metric.hpp"

namespace caplab {

enum class SolveMode { EXACT, GREEDY };

struct CapacityQuery {
  double eps = 1.0;
  PNorm p = PNorm(1);
  SolveMode mode = SolveMode::EXACT;
  /// Centers for non-proper covering; proper covering when null.
  const TabulatedClass* ambient = nullptr;
  /// Separation uses d >= eps - slack, cover balls d < eps + slack.
  double slack = 0.0;
  /// Separation uses d > eps. Only for mutation testing.
  bool strict_separation = false;

  void validate() const;
  bool separated(double d) const;
  bool covers(double d) const;
};

struct CapacityLimits {
  std::size_t exact_class_cap = 64;         // distinct rows for EXACT packing/covering
  std::size_t multiset_cap = 20000;         // tuples enumerated by uniform_capacity
  std::size_t fat_ground_cap = 14;          // ground points for fat_shattering_dim
  std::size_t fat_class_cap = 256;          // rows for fat_shattering_dim
  std::size_t extraction_cap = 1u << 20;    // subsets examined by extraction_search
  std::size_t memo_cap = 1u << 20;          // set-cover memo entries
};

struct CountResult {
  std::size_t value = 0;
  /// True when the value is the exact optimum.
  bool optimal = false;
  /// The separated subset (packing) or the centers (covering), as row indices
  /// of the input (or ambient) class.
  std::vector<std::size_t> members;
};

CountResult packing_number(const TabulatedClass& f, std::span<const std::size_t> pts,
                           const CapacityQuery& q, const CapacityLimits& limits = {});

/// Proper covering by default; with q.ambient, centers come from that class.
CountResult covering_number(const TabulatedClass& f, std::span<const std::size_t> pts,
                            const CapacityQuery& q, const CapacityLimits& limits = {});

enum class Measure { PACKING, COVERING };

struct UniformStrategy {
  enum Kind { ENUMERATE, SAMPLE } kind = ENUMERATE;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static UniformStrategy enumerate() { return {}; }
  static UniformStrategy sample(std::size_t k, std::uint64_t seed) { return {SAMPLE, k, seed}; }
};

struct UniformResult {
  std::size_t value = 0;
  /// False for SAMPLE (a lower bound on the sup) or when the inner solver was greedy.
  bool exact = false;
  PointList argmax;
  std::size_t tuples = 0;
};

/// Sup of the measure over size-n multisets of ground points. For p = inf the
/// measure depends only on the distinct points and grows with them, so the
/// exact sup is taken over subsets of size min(n, ground size).
UniformResult uniform_capacity(const TabulatedClass& f, std::size_t n, Measure measure,
                               const CapacityQuery& q, const UniformStrategy& strategy,
                               const CapacityLimits& limits = {});

struct ShatterCertificate {
  double gamma = 0.0;
  PointList points;
  std::vector<double> witness;
  /// realizers[mask]: a row with l_k (f(t_k) - b_k) >= gamma, where bit k of
  /// mask set means l_k = +1.
  std::vector<std::size_t> realizers;
};

struct FatShatterResult {
  std::size_t dim = 0;
  std::optional<ShatterCertificate> certificate;
  std::vector<double> witness_set;
};

/// {v - gamma, v + gamma : v a value of f} intersected with [-M, M], sorted,
/// merged with `extra`. For a class into [-M, M] this grid loses nothing
/// against the continuous witness set [-M, M].
std::vector<double> default_witness_grid(const TabulatedClass& f, double gamma,
                                         std::span<const double> extra = {});

/// Exact gamma-dimension with witnesses drawn from `witness_set`.
FatShatterResult fat_shattering_dim(const TabulatedClass& f, double gamma,
                                    std::span<const double> witness_set,
                                    const CapacityLimits& limits = {});
/// Uses default_witness_grid(f, gamma).
FatShatterResult fat_shattering_dim(const TabulatedClass& f, double gamma,
                                    const CapacityLimits& limits = {});

/// Checks every (pattern, realizer) inequality of the certificate.
bool replay_certificate(const TabulatedClass& f, const ShatterCertificate& cert);

/// 3 / (112 (2M)^{2p}).
double extraction_constant(int p, double bound);

struct ExtractionResult {
  std::optional<PointList> subvector;
  double target = 0.0;          // (1/2)^{(p+1)/p} eps
  double constant = 0.0;        // extraction_constant(p, M)
  double log_rhs = 0.0;         // constant * r * eps^{2p}
  bool precondition = false;    // ln |F| <= log_rhs
};

/// Smallest sub-multiset of `pts` with at most floor(r) entries on which f
/// stays target-separated. Throws PreconditionError when f is not
/// eps-separated on pts.
ExtractionResult extraction_search(const TabulatedClass& f, std::span<const std::size_t> pts,
                                   double eps, PNorm p, double r,
                                   const CapacityLimits& limits = {});

/// eps -> d(eps): parametric K eps^{-d} or the measured max component dimension.
class DimOracle {
 public:
  static DimOracle parametric(double k, int d, double range);
  /// Witnesses default to default_witness_grid per component and scale.
  static DimOracle measured(std::vector<TabulatedClass> components,
                            CapacityLimits limits = {});

  bool is_parametric() const { return parametric_; }
  double range() const { return range_; }
  double operator()(double eps) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<double, std::size_t> values;
  };

  bool parametric_ = true;
  double k_ = 0.0;
  int d_ = 0;
  double range_ = 0.0;
  std::vector<TabulatedClass> components_;
  CapacityLimits limits_;
  std::shared_ptr<Memo> memo_;
};

}  // namespace caplab
