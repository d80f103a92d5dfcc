#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace plap {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotStyle {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Self-contained SVG line plot. Identical input gives identical bytes.
/// Throws plaplab::DomainError on an empty series set, an empty series, or
/// nonpositive values on a log axis.
std::string render_svg(const std::vector<Series>& series, const PlotStyle& style);

/// Long-format CSV (series,x,y) with a header row.
std::string render_csv(const std::vector<Series>& series);

/// Writes `svg_path` and the CSV next to it (same stem, .csv).
void emit_plot(const std::vector<Series>& series, const PlotStyle& style,
               const std::filesystem::path& svg_path);

}  // namespace plap
