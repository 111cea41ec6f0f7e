#pragma once

#include <string>
#include <vector>

namespace qdev::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  bool log_y = false;
  /// Dashed least-squares line through the first series, in plot coordinates.
  bool guide = false;
};

/// Self-contained SVG, 800 x 600 viewBox, one polyline per series. Output is a
/// pure function of the input. Throws ArgumentError for empty input, NaN or
/// infinite values, mismatched lengths, or non-positive values on a log axis.
std::string render_plot(const std::vector<Series>& series, const PlotStyle& style);
void emit_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path);

/// Slope of the guide line, as written into its data-slope attribute.
double guide_slope(const Series& series, const PlotStyle& style);

}  // namespace qdev::cli
