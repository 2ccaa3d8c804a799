#include "caplab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "caplab/error.hpp"

namespace caplab {

PNorm::PNorm(int p) : p_(p) {
  if (p < 1) throw ValidationError("p must be an integer >= 1 or inf");
}

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "infinity") return inf();
  std::size_t used = 0;
  int p = 0;
  try {
    p = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse p-norm '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("cannot parse p-norm '" + text + "'");
  return PNorm(p);
}

int PNorm::exponent() const {
  if (is_inf()) throw ValidationError("finite p required");
  return p_;
}

std::string PNorm::to_string() const { return is_inf() ? "inf" : std::to_string(p_); }

double dist(std::span<const double> a, std::span<const double> b, std::span<const std::size_t> pts,
            PNorm p) {
  if (pts.empty()) throw ValidationError("distance needs a nonempty point list");
  if (p.is_inf()) {
    double m = 0.0;
    for (std::size_t t : pts) m = std::max(m, std::fabs(a[t] - b[t]));
    return m;
  }
  const int e = p.exponent();
  double sum = 0.0;
  for (std::size_t t : pts) {
    const double d = std::fabs(a[t] - b[t]);
    sum += e == 1 ? d : e == 2 ? d * d : std::pow(d, e);
  }
  const double mean = sum / static_cast<double>(pts.size());
  return e == 1 ? mean : e == 2 ? std::sqrt(mean) : std::pow(mean, 1.0 / e);
}

double dist(const TabulatedClass& f, std::size_t i, std::size_t j, std::span<const std::size_t> pts,
            PNorm p) {
  if (i >= f.size() || j >= f.size()) throw ValidationError("function index out of range");
  for (std::size_t t : pts)
    if (t >= f.ground_size()) throw ValidationError("point index out of range");
  if (i == j) {
    if (pts.empty()) throw ValidationError("distance needs a nonempty point list");
    return 0.0;
  }
  return dist(f.row(i), f.row(j), pts, p);
}

DistanceMatrix::DistanceMatrix(std::size_t count, std::vector<double> entries, PNorm p, PointList pts)
    : count_(count), entries_(std::move(entries)), p_(p), pts_(std::move(pts)) {
  if (entries_.size() != count_ * count_) throw ValidationError("distance matrix shape mismatch");
}

double DistanceMatrix::diameter() const {
  double d = 0.0;
  for (double v : entries_) d = std::max(d, v);
  return d;
}

std::vector<double> DistanceMatrix::distinct_distances() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < count_; ++i)
    for (std::size_t j = i + 1; j < count_; ++j) out.push_back((*this)(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool DistanceMatrix::satisfies_metric_axioms(double tol) const {
  for (std::size_t i = 0; i < count_; ++i) {
    if ((*this)(i, i) != 0.0) return false;
    for (std::size_t j = 0; j < count_; ++j) {
      if ((*this)(i, j) < 0.0 || (*this)(i, j) != (*this)(j, i)) return false;
      for (std::size_t k = 0; k < count_; ++k)
        if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol) return false;
    }
  }
  return true;
}

DistanceMatrix distance_matrix(const TabulatedClass& f, std::span<const std::size_t> pts, PNorm p) {
  if (pts.empty()) throw ValidationError("distance needs a nonempty point list");
  for (std::size_t t : pts)
    if (t >= f.ground_size()) throw ValidationError("point index out of range");
  const std::size_t n = f.size();
  std::vector<double> entries(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(f.row(i), f.row(j), pts, p);
      entries[i * n + j] = d;
      entries[j * n + i] = d;
    }
  }
  return DistanceMatrix(n, std::move(entries), p, PointList(pts.begin(), pts.end()));
}

void write_threshold_graph(std::ostream& out, const DistanceMatrix& d, double eps, bool separation) {
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double v = d(i, j);
      if (separation ? v >= eps : v < eps) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << i << ' ' << j << ' ' << buf << '\n';
      }
    }
  }
}

}  // namespace caplab
