#pragma once

#include <string>
#include <vector>

namespace kgm {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool logy = false;
  std::vector<Series> series;
};

// Simple static SVG renderers; enough for the emitted experiment data.
std::string render_line_plot(const PlotSpec& spec);

struct HeatmapSpec {
  std::string title, xlabel, ylabel;
  std::vector<double> xs, ys;    // cell centers
  std::vector<double> values;    // row-major [iy * nx + ix]
  int nx = 0, ny = 0;
};
std::string render_heatmap(const HeatmapSpec& spec);

}  // namespace kgm
