#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace caplab {

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  bool log_x = false;
  bool log_y = false;
  bool scatter = false;
  std::string title;
  int width = 640;
  int height = 420;

  /// {"x": col, "y": col | [cols], "log_x", "log_y", "kind": "line"|"scatter", "title", "width", "height"}
  static PlotSpec from_json(const nlohmann::json& j);
};

/// SVG text for the CSV; a pure function of its inputs.
std::string render_plot(const std::string& csv_text, const PlotSpec& spec);
void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path);

}  // namespace caplab
