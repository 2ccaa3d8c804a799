#include "caplab/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "caplab/class_io.hpp"
#include "caplab/error.hpp"
#include "caplab/harness/csv.hpp"

namespace caplab {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Empty and non-numeric cells (e.g. a failed sweep cell) yield nullopt.
std::optional<double> number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Axis {
  double lo, hi;
  bool log;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    const double a = log ? std::log10(v) : v;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) {
    const double pad = std::max(0.5, std::fabs(hi) * 0.05);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

std::string tick_label(double a, bool log) {
  if (log) return "1e" + fmt("%.3g", a);
  return fmt("%.4g", a);
}

}  // namespace

PlotSpec PlotSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("plot spec must be a JSON object");
  PlotSpec s;
  if (!j.contains("x") || !j["x"].is_string()) throw ValidationError("field 'x': expected a column name");
  s.x = j["x"].get<std::string>();
  if (!j.contains("y")) throw ValidationError("field 'y': missing");
  if (j["y"].is_string()) {
    s.y.push_back(j["y"].get<std::string>());
  } else if (j["y"].is_array() && !j["y"].empty()) {
    for (std::size_t i = 0; i < j["y"].size(); ++i) {
      if (!j["y"][i].is_string()) throw ValidationError("field 'y[" + std::to_string(i) + "]': expected a string");
      s.y.push_back(j["y"][i].get<std::string>());
    }
  } else {
    throw ValidationError("field 'y': expected a column name or a nonempty array of names");
  }
  auto flag = [&](const char* key, bool& slot) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) throw ValidationError(std::string("field '") + key + "': expected a boolean");
    slot = j[key].get<bool>();
  };
  flag("log_x", s.log_x);
  flag("log_y", s.log_y);
  if (j.contains("kind")) {
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind != "line" && kind != "scatter") throw ValidationError("field 'kind': expected \"line\" or \"scatter\"");
    s.scatter = kind == "scatter";
  }
  if (j.contains("title")) {
    if (!j["title"].is_string()) throw ValidationError("field 'title': expected a string");
    s.title = j["title"].get<std::string>();
  }
  for (const char* key : {"width", "height"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_number_integer() || j[key].get<int>() < 120 || j[key].get<int>() > 8000)
      throw ValidationError(std::string("field '") + key + "': expected an integer in [120, 8000]");
    (std::string(key) == "width" ? s.width : s.height) = j[key].get<int>();
  }
  return s;
}

std::string render_plot(const std::string& csv_text, const PlotSpec& spec) {
  const CsvTable table = parse_csv(csv_text);
  if (table.rows.empty()) throw ValidationError("CSV has no data rows");
  const std::size_t xi = table.column(spec.x);
  std::vector<std::size_t> yi;
  for (const auto& y : spec.y) yi.push_back(table.column(y));

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < yi.size(); ++s) {
    Series ser{spec.y[s], {}};
    for (const auto& row : table.rows) {
      const auto x = number(row[xi]);
      const auto y = number(row[yi[s]]);
      if (!x || !y) continue;
      if ((spec.log_x && *x <= 0.0) || (spec.log_y && *y <= 0.0)) continue;
      ser.pts.emplace_back(*x, *y);
      xs.push_back(*x);
      ys.push_back(*y);
    }
    std::stable_sort(ser.pts.begin(), ser.pts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    series.push_back(std::move(ser));
  }
  if (xs.empty()) throw ValidationError("no plottable numeric points in the selected columns");

  const Axis ax = make_axis(xs, spec.log_x), ay = make_axis(ys, spec.log_y);
  const double w = spec.width, h = spec.height;
  const double left = 70, right = 150, top = spec.title.empty() ? 20 : 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double v) { return left + ax.map(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.map(v)) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    svg += "<text x=\"" + fmt("%.2f", w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(spec.title) + "</text>\n";
  svg += "<rect x=\"" + fmt("%.2f", left) + "\" y=\"" + fmt("%.2f", top) + "\" width=\"" + fmt("%.2f", pw) +
         "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double f = static_cast<double>(t) / ticks;
    const double gx = left + f * pw, gy = top + (1.0 - f) * ph;
    svg += "<line x1=\"" + fmt("%.2f", gx) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" + fmt("%.2f", gx) +
           "\" y2=\"" + fmt("%.2f", top + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", gx) + "\" y=\"" + fmt("%.2f", top + ph + 18) +
           "\" text-anchor=\"middle\">" + tick_label(ax.lo + f * (ax.hi - ax.lo), ax.log) + "</text>\n";
    svg += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", gy) + "\" x2=\"" + fmt("%.2f", left) +
           "\" y2=\"" + fmt("%.2f", gy) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", gy + 4) + "\" text-anchor=\"end\">" +
           tick_label(ay.lo + f * (ay.hi - ay.lo), ay.log) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", left + pw / 2) + "\" y=\"" + fmt("%.2f", h - 10) +
         "\" text-anchor=\"middle\">" + escape(spec.x) + (spec.log_x ? " (log)" : "") + "</text>\n";
  if (spec.log_y)
    svg += "<text x=\"14\" y=\"" + fmt("%.2f", top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           fmt("%.2f", top + ph / 2) + ")\">log scale</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::string color = kPalette[s % std::size(kPalette)];
    const auto& pts = series[s].pts;
    if (spec.scatter) {
      for (const auto& [x, y] : pts)
        svg += "<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) + "\" r=\"3\" fill=\"" +
               color + "\"/>\n";
    } else if (!pts.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) svg += ' ';
        svg += fmt("%.2f", px(pts[i].first)) + "," + fmt("%.2f", py(pts[i].second));
      }
      svg += "\"/>\n";
    }
    const double ly = top + 12 + 18.0 * static_cast<double>(s);
    const double lx = left + pw + 12;
    svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly - 4) + "\" x2=\"" + fmt("%.2f", lx + 20) +
           "\" y2=\"" + fmt("%.2f", ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", lx + 26) + "\" y=\"" + fmt("%.2f", ly) + "\">" + escape(series[s].name) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path) {
  std::FILE* fp = std::fopen(csv_path.c_str(), "rb");
  if (!fp) throw ValidationError("cannot open CSV file '" + csv_path + "'");
  std::string text;
  char buf[4096];
  for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, fp)) > 0;) text.append(buf, got);
  std::fclose(fp);
  write_text_file(out_path, render_plot(text, spec));
}

}  // namespace caplab
