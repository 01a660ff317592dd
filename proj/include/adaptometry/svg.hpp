#pragma once

// Minimal static SVG line charts: x = category labels, one polyline per series.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "csv.hpp"

namespace adaptometry::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // one per x label
};

inline std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string line_chart(std::string_view title, std::string_view y_label,
                              const std::vector<std::string>& x_labels, const std::vector<Series>& series) {
  constexpr double width = 640, height = 400;
  constexpr double left = 70, right = 160, top = 40, bottom = 60;
  constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& s : series)
    for (double v : s.values)
      if (std::isfinite(v)) {
        lo = any ? std::min(lo, v) : v;
        hi = any ? std::max(hi, v) : v;
        any = true;
      }
  lo = std::min(lo, 0.0);
  if (hi <= lo) hi = lo + 1;
  hi += (hi - lo) * 0.05;

  const std::size_t nx = x_labels.size();
  auto px = [&](std::size_t i) { return left + (nx > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(nx - 1) : plot_w / 2); };
  auto py = [&](double v) { return top + plot_h * (1 - (v - lo) / (hi - lo)); };
  auto num = [](double v) { return csv::format_fixed(v, 2); };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape_xml(title) + "</text>\n";

  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
         num(top + plot_h) + "\"/>\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + plot_h) + "\"/>\n";
  out += "</g>\n";

  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(v) + 4) + "\" text-anchor=\"end\">" + num(v) + "</text>\n";
  }
  for (std::size_t i = 0; i < nx; ++i)
    out += "<text x=\"" + num(px(i)) + "\" y=\"" + num(top + plot_h + 18) + "\" text-anchor=\"middle\">" +
           escape_xml(x_labels[i]) + "</text>\n";
  out += "<text x=\"18\" y=\"" + num(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(top + plot_h / 2) + ")\">" + escape_xml(y_label) + "</text>\n";
  out += "</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % std::size(palette)];
    std::string points;
    for (std::size_t i = 0; i < series[s].values.size() && i < nx; ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      if (!points.empty()) points += ' ';
      points += num(px(i)) + "," + num(py(v));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points +
           "\"><title>" + escape_xml(series[s].label) + "</title></polyline>\n";
    const double ly = top + 14 + 18 * static_cast<double>(s);
    out += "<line x1=\"" + num(left + plot_w + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(left + plot_w + 32) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(left + plot_w + 38) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(series[s].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace adaptometry::svg
