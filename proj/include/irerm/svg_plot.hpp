#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace irerm::io {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal self-describing SVG line plot; y may be log10-scaled, in which
// case nonpositive values are dropped.
inline void write_svg_plot(std::ostream& os, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<PlotSeries>& series, bool log_y) {
  const double W = 720, H = 480, ml = 80, mr = 160, mt = 40, mb = 60;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (log_y && !(y > 0.0)) continue;
      if (!std::isfinite(x) || !std::isfinite(ty(y))) continue;
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = ty(y);
        any = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, ty(y));
        ymax = std::max(ymax, ty(y));
      }
    }
  }
  if (!any) {
    xmin = ymin = 0;
    xmax = ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (ty(y) - ymin) / (ymax - ymin) * (H - mt - mb); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return std::string(buf);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 5; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 5.0;
    const double X = px(fx);
    os << "<line x1=\"" << X << "\" y1=\"" << H - mb << "\" x2=\"" << X << "\" y2=\""
       << H - mb + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << X << "\" y=\"" << H - mb + 20
       << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * t / 5.0;
    const double Y = H - mb - (fy - ymin) / (ymax - ymin) * (H - mt - mb);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml << "\" y2=\""
       << Y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
       << (log_y ? "1e" + fmt(fy) : fmt(fy)) << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + H - mb) / 2
     << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = palette[ci % 4];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) {
      if (log_y && !(y > 0.0)) continue;
      if (!std::isfinite(x) || !std::isfinite(ty(y))) continue;
      os << px(x) << ',' << py(y) << ' ';
    }
    os << "\"/>\n";
    const double ly = mt + 16.0 * ci;
    os << "<line x1=\"" << W - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 34
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - mr + 40 << "\" y=\"" << ly + 4 << "\">" << s.label
       << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
}

}  // namespace irerm::io
