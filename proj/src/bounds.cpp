#include "caplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "caplab/error.hpp"
#include "caplab/rademacher.hpp"
#include "caplab/special.hpp"

namespace caplab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void set_log_value(BoundReport& r, double log_value) {
  r.log_domain = true;
  r.log_value = log_value;
  r.value = log_value < 709.0 ? std::exp(log_value) : std::numeric_limits<double>::infinity();
}

void set_value(BoundReport& r, double value) {
  r.value = value;
  r.log_domain = false;
  r.log_value = value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void check_eps_range(double eps, double bound) {
  require(bound > 0.0 && std::isfinite(bound), "bound M must be a positive real");
  require(eps > 0.0 && eps <= 2.0 * bound, "eps must lie in (0, 2M]");
}

void check_delta(double delta) { require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)"); }

void check_gamma(double gamma) { require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]"); }

}  // namespace

double BoundReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms)
    if (k == key) return v;
  throw ValidationError("report '" + name + "' has no term '" + key + "'");
}

bool BoundReport::dominates(double count) const {
  if (count <= 0.0) return true;
  if (!log_domain) return count <= value;
  return std::log(count) <= log_value + 1e-12 * std::max(1.0, std::fabs(log_value));
}

bool BoundReport::strictly_dominates(double count) const {
  if (count <= 0.0) return true;
  if (!log_domain || std::isfinite(value)) return count < value;
  return std::log(count) < log_value;
}

nlohmann::ordered_json BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["inputs"] = inputs;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [k, v] : terms) t[k] = v;
  j["terms"] = t;
  if (std::isfinite(value))
    j["value"] = value;
  else
    j["value"] = nullptr;
  j["log_value"] = log_value;
  j["log_domain"] = log_domain;
  nlohmann::ordered_json f = nlohmann::ordered_json::object();
  for (const auto& [k, v] : flags) f[k] = v;
  j["flags"] = f;
  j["notes"] = notes;
  return j;
}

ChainSchedule::ChainSchedule(std::string name, std::vector<double> h, bool degenerate)
    : name_(std::move(name)), h_(std::move(h)), degenerate_(degenerate) {
  if (h_.size() < 2) throw ValidationError("schedule needs N >= 1 (h(0..N))");
  const bool all_zero = std::all_of(h_.begin(), h_.end(), [](double v) { return v == 0.0; });
  if (degenerate_ && all_zero) return;
  degenerate_ = false;
  for (std::size_t j = 0; j < h_.size(); ++j) {
    if (!(h_[j] > 0.0) || !std::isfinite(h_[j]))
      throw ValidationError("schedule value h(" + std::to_string(j) + ") must be positive");
    if (j > 0 && !(h_[j] < h_[j - 1]))
      throw ValidationError("schedule must be strictly decreasing at j = " + std::to_string(j));
  }
}

ChainSchedule ChainSchedule::geometric_diam(double diam, std::size_t n) {
  if (!(diam >= 0.0)) throw ValidationError("diameter must be nonnegative");
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j) h[j] = std::ldexp(diam, -static_cast<int>(j));
  return ChainSchedule("GEOMETRIC_DIAM", std::move(h), diam == 0.0);
}

ChainSchedule ChainSchedule::geometric_c_gamma_root(std::size_t c, double gamma, std::size_t n) {
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    h[j] = std::ldexp(std::sqrt(static_cast<double>(c)) * gamma, -static_cast<int>(j));
  return ChainSchedule("GEOMETRIC_CGAMMA_ROOT", std::move(h));
}

ChainSchedule ChainSchedule::t7_d1(double gamma, std::size_t n) {
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j) h[j] = std::ldexp(gamma, -2 * static_cast<int>(j));
  return ChainSchedule("T7_D1", std::move(h));
}

ChainSchedule ChainSchedule::t7_d2(double gamma, std::size_t c, std::size_t m) {
  if (m <= c) throw PreconditionError("schedule needs m > C");
  const double ratio = static_cast<double>(m) / static_cast<double>(c);
  const auto n = static_cast<std::size_t>(std::ceil(0.5 * std::log2(ratio)));
  const double base = gamma * std::pow(static_cast<double>(c), 0.75) / std::sqrt(static_cast<double>(m));
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j) h[j] = std::ldexp(base, static_cast<int>(n - j));
  return ChainSchedule("T7_D2", std::move(h));
}

ChainSchedule ChainSchedule::t7_d3(double gamma, std::size_t c, std::size_t m, int d) {
  if (d <= 2) throw ValidationError("T7_D3 schedule needs d > 2");
  if (m <= c) throw PreconditionError("schedule needs m > C");
  const double ratio = static_cast<double>(m) / static_cast<double>(c);
  const auto n = static_cast<std::size_t>(std::ceil((d - 2.0) / (2.0 * d) * std::log2(ratio)));
  const double base = gamma * std::pow(static_cast<double>(c), 0.5 + 1.0 / d) *
                      std::pow(static_cast<double>(m), -1.0 / d);
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    h[j] = base * std::exp2(static_cast<double>(n - j) * 2.0 / (d - 2.0));
  return ChainSchedule("T7_D3", std::move(h));
}

BoundReport decomposition_rhs(const VectorClass& g, const LabeledSample& sample, double eps,
                              PNorm p, const CapacityLimits& limits) {
  sample.validate(g.ground_size(), g.categories());
  require(eps > 0.0, "eps must be positive");
  const double c = static_cast<double>(g.categories());
  const double scaled = p.is_inf() ? eps : eps / std::pow(c, 1.0 / p.exponent());
  const PointList xs = sample.xs();

  BoundReport r;
  r.name = "decomposition";
  r.inputs["eps"] = eps;
  r.inputs["p"] = p.to_string();
  r.inputs["C"] = g.categories();
  r.inputs["m"] = sample.size();
  r.terms.emplace_back("component_eps", scaled);
  double product = 1.0;
  CapacityQuery q;
  q.eps = scaled;
  q.p = p;
  for (std::size_t k = 1; k <= g.categories(); ++k) {
    const auto cov = covering_number(g.component(k), xs, q, limits);
    r.terms.emplace_back("cover_" + std::to_string(k), static_cast<double>(cov.value));
    product *= static_cast<double>(cov.value);
  }
  set_value(r, product);
  return r;
}

long long sauer_shelah_k(double eps, int p, double bound) {
  require(p >= 1, "p must be a finite integer >= 1");
  check_eps_range(eps, bound);
  return static_cast<long long>(std::ceil((p + 2.0) * std::log2(std::ceil(112.0 * bound / eps))));
}

BoundReport sauer_shelah_lp(double eps, int p, double bound, double d) {
  const long long k = sauer_shelah_k(eps, p, bound);
  require(d >= 0.0 && std::isfinite(d), "d must be nonnegative");
  const double kd = static_cast<double>(k);
  const double inner =
      std::log(6272.0) + 1.0 + std::log(kd) - std::log(3.0) + (2.0 * p + 1.0) * std::log(2.0 * bound / eps);
  BoundReport r;
  r.name = "sauer_shelah_lp";
  r.inputs["eps"] = eps;
  r.inputs["p"] = p;
  r.inputs["M"] = bound;
  r.inputs["d"] = d;
  r.terms.emplace_back("K", kd);
  r.terms.emplace_back("log_prefactor", 2.0 * (kd + 1.0) * kLn2);
  r.terms.emplace_back("log_base", inner);
  r.terms.emplace_back("exponent", 2.0 * kd * d);
  set_log_value(r, 2.0 * (kd + 1.0) * kLn2 + 2.0 * kd * d * inner);
  return r;
}

BoundReport sauer_shelah_linf(double eps, double bound, std::size_t n, double d) {
  check_eps_range(eps, bound);
  require(n >= 1, "n must be >= 1");
  require(d >= 1.0 && std::isfinite(d), "d must be >= 1 (the d = 0 case means packing <= 1)");
  const double nn = static_cast<double>(n);
  const double exponent = d * std::log2(4.0 * bound * std::numbers::e * nn / (d * eps));
  const double log_base = std::log(16.0 * bound * bound * nn / (eps * eps));
  BoundReport r;
  r.name = "sauer_shelah_linf";
  r.inputs["eps"] = eps;
  r.inputs["M"] = bound;
  r.inputs["n"] = n;
  r.inputs["d"] = d;
  r.terms.emplace_back("exponent", exponent);
  r.terms.emplace_back("log_base", log_base);
  set_log_value(r, kLn2 + exponent * log_base);
  return r;
}

BoundReport menver_l2(double eps, double bound, double d) {
  check_eps_range(eps, bound);
  require(d >= 0.0 && std::isfinite(d), "d must be nonnegative");
  const double log_base = std::log(3584.0) + 1.0 + 5.0 * std::log(2.0 * bound / eps);
  BoundReport r;
  r.name = "menver_l2";
  r.inputs["eps"] = eps;
  r.inputs["M"] = bound;
  r.inputs["d"] = d;
  r.terms.emplace_back("log_base", log_base);
  r.terms.emplace_back("exponent", 4.0 * d);
  set_log_value(r, 4.0 * d * log_base);
  return r;
}

BoundReport linf_basic_bound(double l_emp, double cov, std::size_t m, double delta) {
  require(cov >= 1.0 && std::isfinite(cov), "covering number must be >= 1");
  require(m >= 1, "m must be >= 1");
  check_delta(delta);
  require(l_emp >= 0.0 && l_emp <= 1.0, "empirical risk must lie in [0, 1]");
  const double mm = static_cast<double>(m);
  const double complexity = std::sqrt(2.0 / mm * (std::log(cov) + std::log(2.0 / delta)));
  BoundReport r;
  r.name = "t2";
  r.inputs["L_emp"] = l_emp;
  r.inputs["cov"] = cov;
  r.inputs["m"] = m;
  r.inputs["delta"] = delta;
  r.terms.emplace_back("empirical", l_emp);
  r.terms.emplace_back("complexity", complexity);
  r.terms.emplace_back("residual", 1.0 / mm);
  set_value(r, l_emp + complexity + 1.0 / mm);
  r.notes.push_back("covering number is the ground-restricted uniform covering");
  return r;
}

BoundReport linf_final_bound(double l_emp, std::size_t c, std::size_t m, double gamma, double bound,
                             double delta, double d) {
  require(c >= 1, "C must be >= 1");
  check_gamma(gamma);
  check_delta(delta);
  require(bound >= 1.0, "M_G must be >= 1");
  require(d >= 0.0 && std::isfinite(d), "d must be nonnegative");
  if (m <= c) throw PreconditionError("bound needs m > C");
  const double mm = static_cast<double>(m), cc = static_cast<double>(c);
  const double ln = std::log(128.0 * bound * bound * mm / (gamma * gamma));
  const double capacity = 3.0 * cc * d * ln * ln;
  const double complexity = std::sqrt(2.0 / mm * (capacity + std::log(2.0 / delta)));
  BoundReport r;
  r.name = "t4";
  r.inputs["L_emp"] = l_emp;
  r.inputs["C"] = c;
  r.inputs["m"] = m;
  r.inputs["gamma"] = gamma;
  r.inputs["M"] = bound;
  r.inputs["delta"] = delta;
  r.inputs["d"] = d;
  r.terms.emplace_back("empirical", l_emp);
  r.terms.emplace_back("complexity", complexity);
  r.terms.emplace_back("capacity_only", std::sqrt(2.0 / mm * capacity));
  r.terms.emplace_back("residual", 1.0 / mm);
  set_value(r, l_emp + complexity + 1.0 / mm);
  r.flags.emplace_back("C_at_least_3", c >= 3);
  return r;
}

BoundReport l2_basic_bound(double l_emp, double rademacher, double gamma, std::size_t m,
                           double delta) {
  check_gamma(gamma);
  check_delta(delta);
  require(m >= 1, "m must be >= 1");
  require(rademacher >= 0.0, "Rademacher complexity must be nonnegative");
  const double mm = static_cast<double>(m);
  const double complexity = 2.0 / gamma * rademacher;
  const double confidence = std::sqrt(std::log(1.0 / delta) / (2.0 * mm));
  BoundReport r;
  r.name = "t5";
  r.inputs["L_emp"] = l_emp;
  r.inputs["R"] = rademacher;
  r.inputs["gamma"] = gamma;
  r.inputs["m"] = m;
  r.inputs["delta"] = delta;
  r.terms.emplace_back("empirical", l_emp);
  r.terms.emplace_back("complexity", complexity);
  r.terms.emplace_back("confidence", confidence);
  set_value(r, l_emp + complexity + confidence);
  return r;
}

BoundReport kms_rhs(const std::vector<TabulatedClass>& components, std::span<const std::size_t> pts,
                    const KmsMethod& method) {
  require(!components.empty(), "need at least one component");
  TabulatedClass u = components.front();
  for (std::size_t k = 1; k < components.size(); ++k) {
    require(components[k].ground_size() == u.ground_size(), "components differ in ground set");
    u = u.union_with(components[k]);
  }
  const RademacherEstimate est = method.exact ? rademacher_exact(u, pts)
                                              : rademacher_mc(u, pts, method.trials, method.seed);
  const double c = static_cast<double>(components.size());
  BoundReport r;
  r.name = "kms";
  r.inputs["C"] = components.size();
  r.inputs["n"] = pts.size();
  r.inputs["method"] = method.exact ? "exact" : "monte_carlo";
  r.terms.emplace_back("union_rademacher", est.value);
  if (!method.exact) r.terms.emplace_back("union_std_error", est.std_error);
  set_value(r, c * est.value);
  return r;
}

BoundReport chained_bound(const ChainSchedule& h, std::size_t c, std::size_t m, double bound,
                          double gamma, const DimOracle& d) {
  check_gamma(gamma);
  require(c >= 1 && m >= 1, "C and m must be positive");
  require(bound >= 1.0, "M_G must be >= 1");
  if (h.degenerate()) throw PreconditionError("chained bound needs a positive schedule");
  const double cc = static_cast<double>(c), rc = std::sqrt(cc);
  if (!(h(0) >= gamma)) throw PreconditionError("schedule needs h(0) >= gamma");
  if (!(h(1) <= 2.0 * bound * rc)) throw PreconditionError("schedule needs h(1) <= 2 M_G sqrt(C)");

  BoundReport r;
  r.name = "t6";
  r.inputs["schedule"] = h.name();
  r.inputs["N"] = h.levels();
  r.inputs["C"] = c;
  r.inputs["m"] = m;
  r.inputs["M"] = bound;
  r.inputs["gamma"] = gamma;
  r.inputs["oracle"] = d.is_parametric() ? "parametric" : "measured";
  const double pref = 4.0 * std::sqrt(5.0 * cc / static_cast<double>(m));
  double sum = 0.0;
  for (std::size_t j = 1; j <= h.levels(); ++j) {
    const double dim = d(h(j) / (96.0 * rc));
    const double term = (h(j) + h(j - 1)) * std::sqrt(dim * std::log(14.0 * bound * rc / h(j)));
    r.terms.emplace_back("d_" + std::to_string(j), dim);
    r.terms.emplace_back("level_" + std::to_string(j), pref * term);
    sum += term;
  }
  r.terms.emplace_back("h_N", h(h.levels()));
  set_value(r, h(h.levels()) + pref * sum);
  return r;
}

double hyp1_f(std::size_t c, double bound, double gamma) {
  return 2.0 * std::sqrt(14.0 * bound / gamma) * std::pow(static_cast<double>(c), 0.25);
}

BoundReport hyp1_bound(int d, double k, std::size_t c, std::size_t m, double gamma, double bound) {
  require(d >= 1, "d_G must be a positive integer");
  require(k > 0.0, "K_G must be positive");
  check_gamma(gamma);
  require(bound >= 1.0, "M_G must be >= 1");
  require(c >= 1, "C must be positive");
  if (m <= c) throw PreconditionError("bound needs m > C");
  const double cc = static_cast<double>(c), mm = static_cast<double>(m);

  BoundReport r;
  r.name = "t7";
  r.inputs["d"] = d;
  r.inputs["K"] = k;
  r.inputs["C"] = c;
  r.inputs["m"] = m;
  r.inputs["gamma"] = gamma;
  r.inputs["M"] = bound;
  if (d == 1) {
    const double f = hyp1_f(c, bound, gamma);
    const double lnf = std::log(f);
    const double pref = 160.0 * std::sqrt(30.0 * k * gamma / mm) * std::pow(cc, 0.75);
    const double root = std::sqrt(lnf / 2.0);
    const double tail = std::sqrt(std::numbers::pi / 8.0) * f * caplab::erfc(std::sqrt(lnf));
    r.notes.push_back("regime d_G = 1");
    r.terms.emplace_back("F", f);
    r.terms.emplace_back("prefactor", pref);
    r.terms.emplace_back("sqrt_log_term", root);
    r.terms.emplace_back("erf_term", tail);
    set_value(r, pref * (root + tail));
  } else if (d == 2) {
    const double levels = std::ceil(0.5 * std::log2(mm / cc));
    const double first = gamma * std::pow(cc, 0.75) / std::sqrt(mm);
    const double second = 1152.0 * std::sqrt(5.0 * k / mm) * cc * levels *
                          std::sqrt(std::log(14.0 * bound * std::sqrt(mm) / (gamma * std::pow(cc, 0.25))));
    r.notes.push_back("regime d_G = 2");
    r.terms.emplace_back("N", levels);
    r.terms.emplace_back("h_N", first);
    r.terms.emplace_back("chain", second);
    set_value(r, first + second);
  } else {
    const double dd = d;
    const double rate = std::pow(cc / mm, 1.0 / dd);
    const double first = gamma * rate;
    const double constant = 8.0 * std::pow(96.0, dd / 2.0) * (std::exp2(2.0 / (dd - 2.0)) + 1.0);
    const double second = constant * std::pow(gamma, 1.0 - dd / 2.0) * std::sqrt(5.0 * k) * rate *
                          std::sqrt(std::log(14.0 * bound / gamma * std::pow(mm / cc, 1.0 / dd)));
    r.notes.push_back("regime d_G > 2");
    r.terms.emplace_back("rate", rate);
    r.terms.emplace_back("constant", constant);
    r.terms.emplace_back("h_N", std::sqrt(cc) * first);
    r.terms.emplace_back("chain", std::sqrt(cc) * second);
    set_value(r, std::sqrt(cc) * (first + second));
  }
  return r;
}

namespace {

double l2_diameter(const TabulatedClass& f, std::span<const std::size_t> pts) {
  return distance_matrix(f, pts, PNorm(2)).diameter();
}

std::size_t proper_l2_cover(const TabulatedClass& f, std::span<const std::size_t> pts, double eps,
                            const CapacityLimits& limits) {
  CapacityQuery q;
  q.eps = eps;
  q.p = PNorm(2);
  return covering_number(f, pts, q, limits).value;
}

}  // namespace

BoundReport dudley_bound(const TabulatedClass& f, std::span<const std::size_t> pts,
                         const ChainSchedule& h, const CapacityLimits& limits) {
  const double diam = l2_diameter(f, pts);
  BoundReport r;
  r.name = "a1_chain";
  r.inputs["schedule"] = h.name();
  r.inputs["N"] = h.levels();
  r.inputs["n"] = pts.size();
  r.terms.emplace_back("diameter", diam);
  if (!(h(0) >= diam)) throw PreconditionError("schedule needs h(0) >= diameter");
  if (h.degenerate()) {
    set_value(r, 0.0);
    return r;
  }
  const double n = static_cast<double>(pts.size());
  double sum = 0.0;
  for (std::size_t j = 1; j <= h.levels(); ++j) {
    const std::size_t cov = proper_l2_cover(f, pts, h(j), limits);
    const double term = 2.0 * (h(j) + h(j - 1)) * std::sqrt(std::log(static_cast<double>(cov)) / n);
    r.terms.emplace_back("cover_" + std::to_string(j), static_cast<double>(cov));
    r.terms.emplace_back("level_" + std::to_string(j), term);
    sum += term;
  }
  r.terms.emplace_back("h_N", h(h.levels()));
  set_value(r, h(h.levels()) + sum);
  return r;
}

BoundReport dudley_integral(const TabulatedClass& f, std::span<const std::size_t> pts,
                            std::size_t steps, const CapacityLimits& limits) {
  const DistanceMatrix dm = distance_matrix(f, pts, PNorm(2));
  const double diam = dm.diameter(), top = diam / 2.0;
  const double n = static_cast<double>(pts.size());
  BoundReport r;
  r.name = "a1_integral";
  r.inputs["n"] = pts.size();
  r.inputs["steps"] = steps;
  r.terms.emplace_back("diameter", diam);
  if (diam == 0.0) {
    set_value(r, 0.0);
    return r;
  }
  auto integrand = [&](double eps) {
    return std::sqrt(std::log(static_cast<double>(proper_l2_cover(f, pts, eps, limits))) / n);
  };
  double integral = 0.0;
  if (steps == 0) {
    // The cover graph (d < eps) only changes when eps passes a pairwise
    // distance, so the integrand is constant on (b_i, b_{i+1}].
    std::vector<double> breaks{0.0};
    for (double v : dm.distinct_distances())
      if (v > 0.0 && v < top) breaks.push_back(v);
    breaks.push_back(top);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double lo = breaks[i], hi = breaks[i + 1];
      if (hi > lo) integral += (hi - lo) * integrand(0.5 * (lo + hi));
    }
    r.terms.emplace_back("pieces", static_cast<double>(breaks.size() - 1));
  } else {
    const double w = top / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) integral += w * integrand((i + 0.5) * w);
  }
  r.terms.emplace_back("integral", integral);
  set_value(r, 12.0 * integral);
  return r;
}

BoundReport combinatorial_ss(double eps, int p, double bound, std::size_t grid_n, std::size_t n,
                             double d) {
  require(p >= 1, "p must be a finite integer >= 1");
  require(bound > 0.0, "bound M must be positive");
  require(grid_n >= 4, "grid resolution N must be >= 4");
  require(n >= 1, "n must be >= 1");
  require(d >= 1.0 && std::isfinite(d), "d must be >= 1");
  const double nn = static_cast<double>(grid_n);
  if (!(eps > 6.0 * bound / nn && eps <= 2.0 * bound))
    throw PreconditionError("eps must lie in (6M/N, 2M]");
  const double levels = (p + 2.0) * std::log2(nn);
  const double log_base = 1.0 + std::log((nn - 1.0) * static_cast<double>(n) / d);
  BoundReport r;
  r.name = "a6";
  r.inputs["eps"] = eps;
  r.inputs["p"] = p;
  r.inputs["M"] = bound;
  r.inputs["N"] = grid_n;
  r.inputs["n"] = n;
  r.inputs["d"] = d;
  r.terms.emplace_back("log_prefactor", (levels + 1.0) * kLn2);
  r.terms.emplace_back("log_base", log_base);
  r.terms.emplace_back("exponent", levels * d);
  set_log_value(r, (levels + 1.0) * kLn2 + levels * d * log_base);
  return r;
}

}  // namespace caplab
