#pragma once

// Minimal static SVG line plots for experiment curves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace arcpoly {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

namespace detail {
inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}
} // namespace detail

/// Writes the series as polylines; points that cannot be drawn on a log axis are skipped.
inline void write_svg_plot(std::ostream& os, const std::vector<PlotSeries>& series, const PlotOptions& o) {
  auto tx = [&](double v) { return o.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return o.log_y ? std::log10(v) : v; };
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!o.log_x || x > 0) && (!o.log_y || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (ok(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double ml = 70, mr = 150, mt = 40, mb = 50;
  const double pw = o.width - ml - mr, ph = o.height - mt - mb;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (ty(v) - y0) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" font-size=\"12\">\n",
                o.width, o.height);
  os << buf;
  std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#444\"/>\n", ml, mt, pw, ph);
  os << buf;
  os << "<text x=\"" << ml << "\" y=\"24\" font-size=\"14\">" << detail::svg_escape(o.title) << "</text>\n";
  auto axis_label = [&](double v, bool log_axis) {
    char b[32];
    if (log_axis) std::snprintf(b, sizeof b, "1e%.2g", v);
    else std::snprintf(b, sizeof b, "%.3g", v);
    return std::string(b);
  };
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                  ml + pw * k / 4.0, mt + ph + 18, axis_label(fx, o.log_x).c_str());
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%s</text>\n", ml - 6,
                  mt + ph - ph * k / 4.0 + 4, axis_label(fy, o.log_y).c_str());
    os << buf;
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << o.height - 10 << "\" text-anchor=\"middle\">"
     << detail::svg_escape(o.xlabel) << "</text>\n";
  os << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" transform=\"rotate(-90 14 " << mt + ph / 2
     << ")\" text-anchor=\"middle\">" << detail::svg_escape(o.ylabel) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (ok(series[s].x[i], series[s].y[i])) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series[s].x[i]), py(series[s].y[i]));
        os << buf;
      }
    os << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", ml + pw + 10,
                  mt + 16 + 18.0 * s, c, detail::svg_escape(series[s].name).c_str());
    os << buf;
  }
  os << "</svg>\n";
}

} // namespace arcpoly
