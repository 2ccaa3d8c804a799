#include "caplab/capacity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include "caplab/error.hpp"
#include "caplab/rng.hpp"

namespace caplab {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return std::numeric_limits<std::size_t>::max();
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  Bits minus(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }
  std::size_t count_and(const Bits& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  void merge(const Bits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
};

struct WordsHash {
  std::size_t operator()(const std::vector<std::uint64_t>& w) const {
    std::uint64_t h = 0x51ed2701ULL;
    for (auto x : w) h = mix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

void check_points(const TabulatedClass& f, std::span<const std::size_t> pts) {
  if (pts.empty()) throw ValidationError("point list must be nonempty");
  for (std::size_t t : pts)
    if (t >= f.ground_size())
      throw ValidationError("point index " + std::to_string(t) + " outside ground set of size " +
                            std::to_string(f.ground_size()));
}

// Rows of f restricted to pts with repeats removed; `origin` maps back to f.
struct Reduced {
  TabulatedClass cls;
  std::vector<std::size_t> origin;
};

Reduced reduce(const TabulatedClass& f, std::span<const std::size_t> pts) {
  const TabulatedClass r = f.restrict_to(pts);
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (seen.emplace(r.row(i).begin(), r.row(i).end()).second) keep.push_back(i);
  return {r.select_rows(keep), keep};
}

std::vector<double> pair_distances(const TabulatedClass& a, const TabulatedClass& b, PNorm p) {
  const PointList cols = all_points(a.ground_size());
  std::vector<double> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = dist(a.row(i), b.row(j), cols, p);
  return out;
}

// Maximum clique with greedy-coloring bounds.
class MaxClique {
 public:
  explicit MaxClique(const std::vector<Bits>& adj) : adj_(adj) {}

  std::vector<std::size_t> solve(std::vector<std::size_t> seed) {
    best_ = std::move(seed);
    std::vector<std::size_t> cand(adj_.size());
    std::iota(cand.begin(), cand.end(), std::size_t{0});
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return adj_[a].count() > adj_[b].count();
    });
    expand(cand);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void color_sort(const std::vector<std::size_t>& cand, std::vector<std::size_t>& order,
                  std::vector<std::size_t>& colors) const {
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t v : cand) {
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool clash = false;
        for (std::size_t u : classes[c])
          if (adj_[v].test(u)) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(v);
    }
    order.clear();
    colors.clear();
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t v : classes[c]) {
        order.push_back(v);
        colors.push_back(c + 1);
      }
  }

  void expand(const std::vector<std::size_t>& cand) {
    std::vector<std::size_t> order, colors;
    color_sort(cand, order, colors);
    for (std::size_t k = order.size(); k-- > 0;) {
      if (cur_.size() + colors[k] <= best_.size()) return;
      const std::size_t v = order[k];
      cur_.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < k; ++i)
        if (adj_[v].test(order[i])) next.push_back(order[i]);
      if (next.empty()) {
        if (cur_.size() > best_.size()) best_ = cur_;
      } else {
        expand(next);
      }
      cur_.pop_back();
    }
  }

  const std::vector<Bits>& adj_;
  std::vector<std::size_t> best_, cur_;
};

std::vector<std::size_t> greedy_packing(std::size_t n, const std::vector<double>& d,
                                        const CapacityQuery& q) {
  std::vector<std::size_t> chosen{0};
  std::vector<double> nearest(n);
  std::vector<bool> ok(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    nearest[i] = d[i];
    ok[i] = i != 0 && q.separated(d[i]);
  }
  for (;;) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (ok[i] && (pick == n || nearest[i] > nearest[pick])) pick = i;
    if (pick == n) break;
    chosen.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      const double dd = d[pick * n + i];
      nearest[i] = std::min(nearest[i], dd);
      ok[i] = ok[i] && i != pick && q.separated(dd);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Minimum set cover of `elements` items by `sets`.
class SetCover {
 public:
  SetCover(std::size_t elements, std::vector<Bits> sets, std::size_t memo_cap)
      : n_(elements), sets_(std::move(sets)), memo_cap_(memo_cap), holders_(n_, Bits(sets_.size())) {
    for (std::size_t c = 0; c < sets_.size(); ++c)
      for (std::size_t e = 0; e < n_; ++e)
        if (sets_[c].test(e)) holders_[e].set(c);
    for (std::size_t e = 0; e < n_; ++e)
      if (!holders_[e].any()) throw PreconditionError("element " + std::to_string(e) + " cannot be covered");
  }

  std::vector<std::size_t> greedy() const {
    Bits unc = all();
    std::vector<std::size_t> chosen;
    while (unc.any()) {
      std::size_t pick = 0, gain = 0;
      for (std::size_t c = 0; c < sets_.size(); ++c) {
        const std::size_t g = sets_[c].count_and(unc);
        if (g > gain) {
          gain = g;
          pick = c;
        }
      }
      chosen.push_back(pick);
      unc = unc.minus(sets_[pick]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  std::vector<std::size_t> exact() {
    best_ = greedy();
    search(all());
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  Bits all() const {
    Bits b(n_);
    for (std::size_t e = 0; e < n_; ++e) b.set(e);
    return b;
  }

  void search(const Bits& unc) {
    if (!unc.any()) {
      if (cur_.size() < best_.size()) best_ = cur_;
      return;
    }
    if (cur_.size() + 1 >= best_.size()) return;

    std::size_t remaining = unc.count(), max_gain = 0;
    for (const auto& s : sets_) max_gain = std::max(max_gain, s.count_and(unc));
    std::size_t lb = (remaining + max_gain - 1) / max_gain;

    // Uncovered elements with pairwise disjoint holder sets each need their own center.
    std::vector<std::pair<std::size_t, std::size_t>> by_holders;
    for (std::size_t e = 0; e < n_; ++e)
      if (unc.test(e)) by_holders.emplace_back(holders_[e].count(), e);
    std::sort(by_holders.begin(), by_holders.end());
    Bits used(sets_.size());
    std::size_t disjoint = 0;
    for (auto [cnt, e] : by_holders) {
      if (!holders_[e].intersects(used)) {
        ++disjoint;
        used.merge(holders_[e]);
      }
    }
    lb = std::max(lb, disjoint);
    if (cur_.size() + lb >= best_.size()) return;

    auto it = memo_.find(unc.words());
    if (it != memo_.end() && it->second <= cur_.size()) return;
    if (it != memo_.end())
      it->second = cur_.size();
    else if (memo_.size() < memo_cap_)
      memo_.emplace(unc.words(), cur_.size());

    const std::size_t e = by_holders.front().second;
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t c = 0; c < sets_.size(); ++c)
      if (holders_[e].test(c)) options.emplace_back(sets_[c].count_and(unc), c);
    std::stable_sort(options.begin(), options.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto [gain, c] : options) {
      cur_.push_back(c);
      search(unc.minus(sets_[c]));
      cur_.pop_back();
      if (cur_.size() + 1 >= best_.size()) return;
    }
  }

  std::size_t n_;
  std::vector<Bits> sets_;
  std::size_t memo_cap_;
  std::vector<Bits> holders_;
  std::vector<std::size_t> best_, cur_;
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, WordsHash> memo_;
};

std::size_t saturating_binomial(std::size_t n, std::size_t k, std::size_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(r)));
}

// Advances a nondecreasing (multiset) or strictly increasing (subset) index
// tuple over [0, base); false when exhausted.
bool next_tuple(std::vector<std::size_t>& idx, std::size_t base, bool strict) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    const std::size_t cap = strict ? base - (k - i) : base - 1;
    if (idx[i] < cap) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = strict ? idx[j - 1] + 1 : idx[i];
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_tuple(std::size_t k, bool strict) {
  std::vector<std::size_t> idx(k, 0);
  if (strict) std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

void CapacityQuery::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be a positive real");
  if (!(slack >= 0.0) || !(slack < eps)) throw ValidationError("slack must lie in [0, eps)");
}

bool CapacityQuery::separated(double d) const {
  const double t = eps - slack;
  return strict_separation ? d > t : d >= t;
}

bool CapacityQuery::covers(double d) const { return d < eps + slack; }

CountResult packing_number(const TabulatedClass& f, std::span<const std::size_t> pts,
                           const CapacityQuery& q, const CapacityLimits& limits) {
  q.validate();
  check_points(f, pts);
  const Reduced r = reduce(f, pts);
  const std::size_t n = r.cls.size();
  const std::vector<double> d = pair_distances(r.cls, r.cls, q.p);

  CountResult out;
  std::vector<std::size_t> chosen = greedy_packing(n, d, q);
  if (q.mode == SolveMode::EXACT) {
    if (n > limits.exact_class_cap)
      throw ResourceLimitError("exact packing limited to " + std::to_string(limits.exact_class_cap) +
                               " distinct functions (got " + std::to_string(n) +
                               "); use GREEDY mode");
    std::vector<Bits> adj(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && q.separated(d[i * n + j])) adj[i].set(j);
    chosen = MaxClique(adj).solve(chosen);
    out.optimal = true;
  }
  out.value = chosen.size();
  for (std::size_t i : chosen) out.members.push_back(r.origin[i]);
  return out;
}

CountResult covering_number(const TabulatedClass& f, std::span<const std::size_t> pts,
                            const CapacityQuery& q, const CapacityLimits& limits) {
  q.validate();
  check_points(f, pts);
  const Reduced r = reduce(f, pts);
  Reduced centers = r;
  if (q.ambient) {
    if (q.ambient->ground_size() != f.ground_size())
      throw ValidationError("ambient class is over a different ground set");
    centers = reduce(*q.ambient, pts);
  }
  const std::size_t n = r.cls.size(), k = centers.cls.size();
  if (q.mode == SolveMode::EXACT && std::max(n, k) > limits.exact_class_cap)
    throw ResourceLimitError("exact covering limited to " + std::to_string(limits.exact_class_cap) +
                             " distinct functions (got " + std::to_string(std::max(n, k)) +
                             "); use GREEDY mode");
  const std::vector<double> d = pair_distances(centers.cls, r.cls, q.p);
  std::vector<Bits> sets(k, Bits(n));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t e = 0; e < n; ++e)
      if (q.covers(d[c * n + e])) sets[c].set(e);

  SetCover solver(n, std::move(sets), limits.memo_cap);
  CountResult out;
  const std::vector<std::size_t> chosen =
      q.mode == SolveMode::EXACT ? solver.exact() : solver.greedy();
  out.optimal = q.mode == SolveMode::EXACT;
  out.value = chosen.size();
  for (std::size_t c : chosen) out.members.push_back(centers.origin[c]);
  return out;
}

UniformResult uniform_capacity(const TabulatedClass& f, std::size_t n, Measure measure,
                               const CapacityQuery& q, const UniformStrategy& strategy,
                               const CapacityLimits& limits) {
  if (n == 0) throw ValidationError("uniform capacity needs n >= 1");
  q.validate();
  const std::size_t g = f.ground_size();
  auto eval = [&](const PointList& pts) {
    return measure == Measure::PACKING ? packing_number(f, pts, q, limits).value
                                       : covering_number(f, pts, q, limits).value;
  };

  UniformResult out;
  out.exact = q.mode == SolveMode::EXACT && strategy.kind == UniformStrategy::ENUMERATE;
  if (strategy.kind == UniformStrategy::SAMPLE) {
    if (strategy.samples == 0) throw ValidationError("SAMPLE strategy needs k >= 1");
    for (std::size_t s = 0; s < strategy.samples; ++s) {
      Rng rng(derive_seed(strategy.seed, s));
      PointList pts(n);
      for (auto& t : pts) t = rng.index(g);
      std::sort(pts.begin(), pts.end());
      const std::size_t v = eval(pts);
      ++out.tuples;
      if (out.tuples == 1 || v > out.value) {
        out.value = v;
        out.argmax = pts;
      }
    }
    return out;
  }

  const bool by_support = q.p.is_inf();
  const std::size_t k = by_support ? std::min(n, g) : n;
  const std::size_t count =
      by_support ? saturating_binomial(g, k, limits.multiset_cap)
                 : saturating_binomial(g + n - 1, n, limits.multiset_cap);
  if (count > limits.multiset_cap)
    throw ResourceLimitError("uniform capacity enumeration exceeds cap of " +
                             std::to_string(limits.multiset_cap) + " tuples; use SAMPLE");
  std::vector<std::size_t> idx = first_tuple(k, by_support);
  do {
    const std::size_t v = eval(idx);
    ++out.tuples;
    if (out.tuples == 1 || v > out.value) {
      out.value = v;
      out.argmax = idx;
    }
  } while (next_tuple(idx, g, by_support));
  while (out.argmax.size() < n) out.argmax.push_back(out.argmax.back());
  return out;
}

std::vector<double> default_witness_grid(const TabulatedClass& f, double gamma,
                                         std::span<const double> extra) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const double m = f.bound();
  std::set<double> grid(extra.begin(), extra.end());
  // Nudge by ulps so that v - b >= gamma (or b - v >= gamma) holds in
  // floating point, not just in exact arithmetic.
  for (double v : f.values()) {
    if (v - gamma >= -m) {
      double b = v - gamma;
      while (v - b < gamma) b = std::nextafter(b, -INFINITY);
      grid.insert(std::max(b, -m));
    }
    if (v + gamma <= m) {
      double b = v + gamma;
      while (b - v < gamma) b = std::nextafter(b, INFINITY);
      grid.insert(std::min(b, m));
    }
  }
  return {grid.begin(), grid.end()};
}

namespace {

struct Option {
  double b;
  Bits plus, minus;
};

class Shatterer {
 public:
  Shatterer(const std::vector<std::vector<Option>>& options, std::size_t rows)
      : options_(options), rows_(rows) {}

  bool run(const PointList& subset) {
    subset_ = &subset;
    witness_.assign(subset.size(), 0.0);
    Bits all(rows_);
    for (std::size_t i = 0; i < rows_; ++i) all.set(i);
    return step(0, {all});
  }

  const std::vector<double>& witness() const { return witness_; }
  const std::vector<Bits>& groups() const { return final_; }

 private:
  bool step(std::size_t i, const std::vector<Bits>& groups) {
    const std::size_t q = subset_->size();
    if (i == q) {
      final_ = groups;
      return true;
    }
    const std::size_t need = std::size_t{1} << (q - i - 1);
    for (const Option& o : options_[(*subset_)[i]]) {
      std::vector<Bits> next(groups.size() * 2);
      bool ok = true;
      for (std::size_t m = 0; m < groups.size() && ok; ++m) {
        next[m] = groups[m] & o.minus;
        next[m | groups.size()] = groups[m] & o.plus;
        ok = next[m].count() >= need && next[m | groups.size()].count() >= need;
      }
      if (!ok) continue;
      witness_[i] = o.b;
      if (step(i + 1, next)) return true;
    }
    return false;
  }

  const std::vector<std::vector<Option>>& options_;
  std::size_t rows_;
  const PointList* subset_ = nullptr;
  std::vector<double> witness_;
  std::vector<Bits> final_;
};

}  // namespace

FatShatterResult fat_shattering_dim(const TabulatedClass& f, double gamma,
                                    std::span<const double> witness_set,
                                    const CapacityLimits& limits) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be a positive real");
  if (witness_set.empty()) throw ValidationError("witness set must be nonempty");
  if (f.ground_size() > limits.fat_ground_cap)
    throw ResourceLimitError("fat-shattering search limited to " +
                             std::to_string(limits.fat_ground_cap) + " ground points");
  if (f.size() > limits.fat_class_cap)
    throw ResourceLimitError("fat-shattering search limited to " +
                             std::to_string(limits.fat_class_cap) + " functions");

  FatShatterResult out;
  std::set<double> sorted(witness_set.begin(), witness_set.end());
  out.witness_set.assign(sorted.begin(), sorted.end());

  const Reduced r = reduce(f, all_points(f.ground_size()));
  const std::size_t rows = r.cls.size();
  std::size_t max_q = 0;
  while ((std::size_t{2} << max_q) <= rows) ++max_q;

  // Per point, the distinct (plus, minus) splits a witness can induce. Both
  // sets are monotone in b, so their sizes identify them.
  std::vector<std::vector<Option>> options(f.ground_size());
  PointList usable;
  for (std::size_t t = 0; t < f.ground_size(); ++t) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (double b : out.witness_set) {
      Option o{b, Bits(rows), Bits(rows)};
      for (std::size_t i = 0; i < rows; ++i) {
        const double v = r.cls(i, t);
        // Same expression as replay_certificate, so certificates always replay.
        if (v - b >= gamma) o.plus.set(i);
        if (b - v >= gamma) o.minus.set(i);
      }
      if (!o.plus.any() || !o.minus.any()) continue;
      if (!seen.emplace(o.plus.count(), o.minus.count()).second) continue;
      options[t].push_back(std::move(o));
    }
    if (!options[t].empty()) usable.push_back(t);
  }

  Shatterer sh(options, rows);
  for (std::size_t q = 1; q <= std::min(max_q, usable.size()); ++q) {
    bool found = false;
    std::vector<std::size_t> idx = first_tuple(q, true);
    do {
      PointList subset;
      for (std::size_t i : idx) subset.push_back(usable[i]);
      if (sh.run(subset)) {
        ShatterCertificate cert;
        cert.gamma = gamma;
        cert.points = subset;
        cert.witness = sh.witness();
        for (const Bits& g : sh.groups()) cert.realizers.push_back(r.origin[g.first()]);
        out.dim = q;
        out.certificate = std::move(cert);
        found = true;
        break;
      }
    } while (next_tuple(idx, usable.size(), true));
    if (!found) break;
  }
  return out;
}

FatShatterResult fat_shattering_dim(const TabulatedClass& f, double gamma,
                                    const CapacityLimits& limits) {
  return fat_shattering_dim(f, gamma, default_witness_grid(f, gamma), limits);
}

bool replay_certificate(const TabulatedClass& f, const ShatterCertificate& cert) {
  const std::size_t q = cert.points.size();
  if (cert.witness.size() != q || cert.realizers.size() != (std::size_t{1} << q)) return false;
  for (std::size_t mask = 0; mask < cert.realizers.size(); ++mask) {
    const std::size_t j = cert.realizers[mask];
    if (j >= f.size()) return false;
    for (std::size_t k = 0; k < q; ++k) {
      if (cert.points[k] >= f.ground_size()) return false;
      const double sign = (mask >> k) & 1u ? 1.0 : -1.0;
      if (!(sign * (f(j, cert.points[k]) - cert.witness[k]) >= cert.gamma)) return false;
    }
  }
  return true;
}

double extraction_constant(int p, double bound) {
  if (p < 1) throw ValidationError("extraction constant needs finite p >= 1");
  if (!(bound > 0.0)) throw ValidationError("bound must be positive");
  return 3.0 / (112.0 * std::pow(2.0 * bound, 2.0 * p));
}

ExtractionResult extraction_search(const TabulatedClass& f, std::span<const std::size_t> pts,
                                   double eps, PNorm p, double r, const CapacityLimits& limits) {
  check_points(f, pts);
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  const int e = p.exponent();
  if (!(r >= 1.0) || r > static_cast<double>(pts.size()))
    throw ValidationError("r must lie in [1, |pts|]");
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (!(dist(f.row(i), f.row(j), pts, p) >= eps))
        throw PreconditionError("class is not eps-separated on the point list (rows " +
                                std::to_string(i) + ", " + std::to_string(j) + ")");

  ExtractionResult out;
  out.target = std::pow(0.5, static_cast<double>(e + 1) / e) * eps;
  out.constant = extraction_constant(e, f.bound());
  out.log_rhs = out.constant * r * std::pow(eps, 2.0 * e);
  out.precondition = std::log(static_cast<double>(f.size())) <= out.log_rhs;

  const std::size_t q_max = static_cast<std::size_t>(std::floor(r));
  std::size_t examined = 0;
  for (std::size_t q = 1; q <= q_max; ++q) {
    std::vector<std::size_t> idx = first_tuple(q, true);
    do {
      if (++examined > limits.extraction_cap)
        throw ResourceLimitError("extraction search exceeds cap of " +
                                 std::to_string(limits.extraction_cap) + " subsets");
      PointList sub;
      for (std::size_t i : idx) sub.push_back(pts[i]);
      bool ok = true;
      for (std::size_t i = 0; i < f.size() && ok; ++i)
        for (std::size_t j = i + 1; j < f.size() && ok; ++j)
          ok = dist(f.row(i), f.row(j), sub, p) >= out.target;
      if (ok) {
        out.subvector = sub;
        return out;
      }
    } while (next_tuple(idx, pts.size(), true));
  }
  return out;
}

DimOracle DimOracle::parametric(double k, int d, double range) {
  if (!(k > 0.0)) throw ValidationError("K_G must be positive");
  if (d < 1) throw ValidationError("d_G must be a positive integer");
  if (!(range > 0.0)) throw ValidationError("oracle range must be positive");
  DimOracle o;
  o.parametric_ = true;
  o.k_ = k;
  o.d_ = d;
  o.range_ = range;
  return o;
}

DimOracle DimOracle::measured(std::vector<TabulatedClass> components, CapacityLimits limits) {
  if (components.empty()) throw ValidationError("measured oracle needs at least one class");
  DimOracle o;
  o.parametric_ = false;
  o.range_ = 0.0;
  for (const auto& c : components) o.range_ = std::max(o.range_, c.bound());
  o.components_ = std::move(components);
  o.limits_ = limits;
  o.memo_ = std::make_shared<Memo>();
  return o;
}

double DimOracle::operator()(double eps) const {
  if (!(eps > 0.0) || eps > range_)
    throw ValidationError("dimension oracle argument " + std::to_string(eps) + " outside (0, " +
                          std::to_string(range_) + "]");
  if (parametric_) return k_ * std::pow(eps, -static_cast<double>(d_));
  std::lock_guard<std::mutex> lock(memo_->mutex);
  auto it = memo_->values.find(eps);
  if (it != memo_->values.end()) return static_cast<double>(it->second);
  std::size_t d = 0;
  for (const auto& c : components_) d = std::max(d, fat_shattering_dim(c, eps, limits_).dim);
  memo_->values.emplace(eps, d);
  return static_cast<double>(d);
}

}  // namespace caplab
