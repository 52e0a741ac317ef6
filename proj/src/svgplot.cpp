#include "svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace kgm {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kL = 80, kR = 170, kT = 40, kB = 60;  // margins (legend right)

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void axis_range(double lo, double hi, double& out_lo, double& out_hi) {
  if (!(lo < hi)) {
    out_lo = lo - 1;
    out_hi = hi + 1;
    return;
  }
  const double pad = 0.05 * (hi - lo);
  out_lo = lo - pad;
  out_hi = hi + pad;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec) {
  if (spec.series.empty()) throw IoError("plot: no series to draw");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (spec.logy) {
        if (y <= 0) y = 1e-16;
        y = std::log10(y);
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  double x0, x1, y0, y1;
  axis_range(xmin, xmax, x0, x1);
  axis_range(ymin, ymax, y0, y1);
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double yv) { return kH - kB - (yv - y0) / (y1 - y0) * (kH - kT - kB); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
      << "' font-family='sans-serif' font-size='12'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='15'>"
      << spec.title << "</text>\n";
  // axes
  svg << "<line x1='" << kL << "' y1='" << kH - kB << "' x2='" << kW - kR << "' y2='"
      << kH - kB << "' stroke='black'/>\n";
  svg << "<line x1='" << kL << "' y1='" << kT << "' x2='" << kL << "' y2='" << kH - kB
      << "' stroke='black'/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x0 + (x1 - x0) * t / 5.0;
    const double fy = y0 + (y1 - y0) * t / 5.0;
    svg << "<text x='" << px(fx) << "' y='" << kH - kB + 18
        << "' text-anchor='middle'>" << num(fx) << "</text>\n";
    const std::string ylab = spec.logy ? ("1e" + num(fy)) : num(fy);
    svg << "<text x='" << kL - 8 << "' y='" << py(fy) + 4
        << "' text-anchor='end'>" << ylab << "</text>\n";
    svg << "<line x1='" << kL << "' y1='" << py(fy) << "' x2='" << kW - kR << "' y2='"
        << py(fy) << "' stroke='#dddddd'/>\n";
  }
  svg << "<text x='" << (kL + kW - kR) / 2 << "' y='" << kH - 16
      << "' text-anchor='middle'>" << spec.xlabel << "</text>\n";
  svg << "<text x='18' y='" << (kT + kH - kB) / 2
      << "' text-anchor='middle' transform='rotate(-90 18 " << (kT + kH - kB) / 2
      << ")'>" << spec.ylabel << "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const Series& s = spec.series[si];
    const char* colour = kPalette[si % 8];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double y = s.y[i];
      if (spec.logy) y = std::log10(std::max(y, 1e-16));
      pts << px(s.x[i]) << "," << py(y) << " ";
      svg << "<circle cx='" << px(s.x[i]) << "' cy='" << py(y) << "' r='3' fill='"
          << colour << "'/>\n";
    }
    svg << "<polyline points='" << pts.str() << "' fill='none' stroke='" << colour
        << "' stroke-width='1.5'/>\n";
    const double ly = kT + 16 * si;
    svg << "<rect x='" << kW - kR + 10 << "' y='" << ly << "' width='12' height='12' fill='"
        << colour << "'/>\n";
    svg << "<text x='" << kW - kR + 28 << "' y='" << ly + 10 << "'>" << s.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_heatmap(const HeatmapSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1 || spec.values.empty())
    throw IoError("heatmap: empty grid");
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (double v : spec.values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  // compact viridis-like ramp
  const double anchors[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                {94, 201, 98}, {253, 231, 37}};
  auto colour = [&](double v) {
    double t = (v - vmin) / span;
    t = std::clamp(t, 0.0, 1.0) * 4;
    const int i = std::min(3, (int)t);
    const double f = t - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  (int)(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0])),
                  (int)(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1])),
                  (int)(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2])));
    return std::string(buf);
  };
  const double cw = (kW - kL - kR) / spec.nx, ch = (kH - kT - kB) / spec.ny;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
      << "' font-family='sans-serif' font-size='12'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='15'>"
      << spec.title << "</text>\n";
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix) {
      const double v = spec.values[(std::size_t)iy * spec.nx + ix];
      svg << "<rect x='" << kL + ix * cw << "' y='" << kH - kB - (iy + 1) * ch
          << "' width='" << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='"
          << colour(v) << "'/>\n";
    }
  svg << "<text x='" << kL << "' y='" << kH - kB + 18 << "'>" << spec.xlabel << " in ["
      << num(spec.xs.front()) << ", " << num(spec.xs.back()) << "]</text>\n";
  svg << "<text x='" << kL << "' y='" << kH - kB + 34 << "'>" << spec.ylabel << " in ["
      << num(spec.ys.front()) << ", " << num(spec.ys.back()) << "]</text>\n";
  svg << "<text x='" << kW - kR + 10 << "' y='" << kT + 10 << "'>min=" << num(vmin)
      << "</text>\n";
  svg << "<text x='" << kW - kR + 10 << "' y='" << kT + 26 << "'>max=" << num(vmax)
      << "</text>\n";
  for (int t = 0; t <= 20; ++t) {
    svg << "<rect x='" << kW - kR + 10 << "' y='" << kT + 40 + (20 - t) * 8
        << "' width='18' height='8' fill='" << colour(vmin + span * t / 20.0)
        << "'/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace kgm
