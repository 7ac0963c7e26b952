#pragma once

// Headless SVG 1.1 scatter plots with an optional straight fit line.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace thermovalue::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::string label;
  std::string color = "#1f77b4";
};

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

struct LegendEntry {
  std::string label;
  std::string color;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Point> points;
  std::optional<Line> fit;
  std::string annotation;  // drawn in the upper-left corner of the plot area
  std::vector<LegendEntry> legend;
  int width = 900;
  int height = 640;
};

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Roughly `target` evenly spaced round values covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

inline std::string render(const ScatterPlot& plot) {
  constexpr double left = 80, right = 30, top = 50, bottom = 70;
  const double w = plot.width - left - right;
  const double h = plot.height - top - bottom;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!plot.points.empty()) {
    const auto [xa, xb] = std::minmax_element(plot.points.begin(), plot.points.end(),
                                              [](const auto& a, const auto& b) { return a.x < b.x; });
    const auto [ya, yb] = std::minmax_element(plot.points.begin(), plot.points.end(),
                                              [](const auto& a, const auto& b) { return a.y < b.y; });
    xmin = xa->x, xmax = xb->x, ymin = ya->y, ymax = yb->y;
  }
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * w; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * h; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n",
      plot.width, plot.height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", plot.width, plot.height);
  out += fmt::format("<text x=\"{:.1f}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                     left + w / 2, escape(plot.title));

  // Axes box, ticks and grid.
  out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     left, top, w, h);
  out += "<g class=\"ticks\" font-size=\"11\" stroke-width=\"0.5\">\n";
  for (double t : nice_ticks(xmin, xmax)) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#dddddd\"/>\n",
                       sx(t), top, top + h);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", sx(t), top + h + 16,
                       t);
  }
  for (double t : nice_ticks(ymin, ymax)) {
    out += fmt::format("<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#dddddd\"/>\n",
                       sy(t), left, left + w);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 6, sy(t) + 4, t);
  }
  out += "</g>\n";
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                     left + w / 2, static_cast<double>(plot.height) - 20, escape(plot.x_label));
  out += fmt::format(
      "<text x=\"20\" y=\"{0:.1f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.1f})\">"
      "{1}</text>\n",
      top + h / 2, escape(plot.y_label));

  if (plot.fit) {
    const double x0 = xmin, x1 = xmax;
    const double y0 = plot.fit->slope * x0 + plot.fit->intercept;
    const double y1 = plot.fit->slope * x1 + plot.fit->intercept;
    out += fmt::format("<clipPath id=\"plot-area\"><rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" "
                       "height=\"{:.1f}\"/></clipPath>\n",
                       left, top, w, h);
    out += fmt::format("<line class=\"fit\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                       "stroke=\"black\" stroke-width=\"1.5\" clip-path=\"url(#plot-area)\"/>\n",
                       sx(x0), sy(y0), sx(x1), sy(y1));
  }

  out += "<g class=\"points\" font-size=\"10\">\n";
  for (const auto& p : plot.points) {
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", sx(p.x), sy(p.y), p.color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", sx(p.x) + 5, sy(p.y) - 5, escape(p.label));
  }
  out += "</g>\n";

  if (!plot.annotation.empty())
    out += fmt::format("<text class=\"annotation\" x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"13\">{}</text>\n", left + 10,
                       top + 20, escape(plot.annotation));
  for (std::size_t i = 0; i < plot.legend.size(); ++i) {
    const double y = top + 20 + 18 * static_cast<double>(i);
    const double x = left + w - 150;
    out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"5\" fill=\"{}\"/>\n", x, y - 4, plot.legend[i].color);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\">{}</text>\n", x + 10, y,
                       escape(plot.legend[i].label));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace thermovalue::svg
