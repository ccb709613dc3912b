#pragma once

#include <string>
#include <vector>

#include "lapsim/geometry.hpp"
#include "lapsim/io.hpp"

namespace lapsim {

/// Color-wheel rendering of a flow field: hue encodes the vector direction,
/// saturation the magnitude normalized by the field maximum (a zero field is
/// therefore uniform white).
RgbImage colorize_flow(const FlowField& flow);

struct PlotSeries {
  std::string name;
  std::vector<double> values; // y per column, x is the 1-based column index
  uint8_t r = 0, g = 0, b = 0;
};

/// Minimal self-contained line plot: axes with tick labels, one polyline per
/// series, legend in the top-right corner.
RgbImage render_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& y_label, int width = 960,
                          int height = 420);

} // namespace lapsim
