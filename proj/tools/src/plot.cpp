#include "qdev/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qdev/cli/records.hpp"
#include "qdev/errors.hpp"

namespace qdev::cli {
namespace {

constexpr double kLeft = 80, kRight = 760, kTop = 40, kBottom = 540;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

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

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double to_axis(double v, bool log) { return log ? std::log10(v) : v; }

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void widen() {
    if (hi - lo <= 0.0) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double map(double v, double a, double b) const { return a + (b - a) * (v - lo) / (hi - lo); }
};

void check(const std::vector<Series>& series, const PlotStyle& style) {
  if (series.empty()) throw ArgumentError("emit_plot: no series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw ArgumentError("emit_plot: series must be non-empty with matching lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        throw ArgumentError("emit_plot: non-finite value in series " + s.label);
      }
      if ((style.log_x && !(s.x[i] > 0.0)) || (style.log_y && !(s.y[i] > 0.0))) {
        throw ArgumentError("emit_plot: non-positive value on a log axis");
      }
    }
  }
}

}  // namespace

double guide_slope(const Series& s, const PlotStyle& style) {
  const std::size_t count = s.x.size();
  if (count < 2) throw ArgumentError("guide_slope: at least two points required");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += to_axis(s.x[i], style.log_x);
    my += to_axis(s.y[i], style.log_y);
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = to_axis(s.x[i], style.log_x) - mx;
    sxy += dx * (to_axis(s.y[i], style.log_y) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw ArgumentError("guide_slope: degenerate abscissae");
  return sxy / sxx;
}

std::string render_plot(const std::vector<Series>& series, const PlotStyle& style) {
  check(series, style);
  Range xr, yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = to_axis(s.x[i], style.log_x), y = to_axis(s.y[i], style.log_y);
      xr.lo = std::min(xr.lo, x);
      xr.hi = std::max(xr.hi, x);
      yr.lo = std::min(yr.lo, y);
      yr.hi = std::max(yr.hi, y);
    }
  }
  xr.widen();
  yr.widen();
  auto px = [&](double x) { return xr.map(to_axis(x, style.log_x), kLeft, kRight); };
  auto py = [&](double y) { return yr.map(to_axis(y, style.log_y), kBottom, kTop); };
  auto label_value = [](double v, bool log) { return log ? std::pow(10.0, v) : v; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + escape(style.title) + "</text>\n";
  svg += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"80\" y1=\"540\" x2=\"760\" y2=\"540\"/>\n";
  svg += "<line x1=\"80\" y1=\"540\" x2=\"80\" y2=\"40\"/>\n";
  svg += "</g>\n";
  svg += "<g font-size=\"12\">\n";
  svg += "<text x=\"80\" y=\"558\" text-anchor=\"middle\">" + tick(label_value(xr.lo, style.log_x)) + "</text>\n";
  svg += "<text x=\"760\" y=\"558\" text-anchor=\"middle\">" + tick(label_value(xr.hi, style.log_x)) + "</text>\n";
  svg += "<text x=\"74\" y=\"544\" text-anchor=\"end\">" + tick(label_value(yr.lo, style.log_y)) + "</text>\n";
  svg += "<text x=\"74\" y=\"44\" text-anchor=\"end\">" + tick(label_value(yr.hi, style.log_y)) + "</text>\n";
  svg += "<text x=\"420\" y=\"586\" text-anchor=\"middle\">" + escape(style.x_label) +
         (style.log_x ? " (log)" : "") + "</text>\n";
  svg += "<text x=\"20\" y=\"290\" text-anchor=\"middle\" transform=\"rotate(-90 20 290)\">" +
         escape(style.y_label) + (style.log_y ? " (log)" : "") + "</text>\n";
  svg += "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    svg += "<polyline class=\"series\" data-label=\"" + escape(s.label) + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg += ' ';
      svg += fixed(px(s.x[i])) + "," + fixed(py(s.y[i]));
    }
    svg += "\"/>\n";
    svg += "<text x=\"600\" y=\"" + fixed(60.0 + 16.0 * static_cast<double>(k)) + "\" font-size=\"12\" fill=\"" +
           color + "\">" + escape(s.label) + "</text>\n";
  }

  if (style.guide && series.front().x.size() >= 2) {
    const auto& s = series.front();
    const double slope = guide_slope(s, style);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      mx += to_axis(s.x[i], style.log_x);
      my += to_axis(s.y[i], style.log_y);
    }
    mx /= static_cast<double>(s.x.size());
    my /= static_cast<double>(s.x.size());
    const double y0 = my + slope * (xr.lo - mx), y1 = my + slope * (xr.hi - mx);
    svg += "<line class=\"guide\" data-slope=\"" + format_double(slope) + "\" x1=\"" + fixed(kLeft) +
           "\" y1=\"" + fixed(yr.map(y0, kBottom, kTop)) + "\" x2=\"" + fixed(kRight) + "\" y2=\"" +
           fixed(yr.map(y1, kBottom, kTop)) + "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path) {
  const std::string svg = render_plot(series, style);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << svg;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace qdev::cli
