#pragma once

#include <string>
#include <vector>

#include "ceco/sim.hpp"

namespace ceco {

// Static SVG rendering of a simulation trace: comfort index with its bounds,
// cabin temperature, actuator commands, and electrical powers.

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f6fb2";
  bool dashed = false;
};

// One x-y panel with axes, ticks, and a legend.
std::string render_svg_panel(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series);

// Writes pmv.svg, cabin_temp.svg, controls.svg, powers.svg into out_dir and
// returns their paths. Throws ValidationError on an empty trace.
std::vector<std::string> write_trace_plots(const SimTrace& trace,
                                           const std::string& out_dir);

}  // namespace ceco
