#include "ceco/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace ceco {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Round-ish tick spacing covering [lo, hi] with about n intervals.
double tick_step(double lo, double hi, int n) {
  const double span = std::max(hi - lo, 1e-12);
  const double raw = span / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 5.0) step = 5.0;
  return step * mag;
}

}  // namespace

std::string render_svg_panel(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (double v : s.x) { x_lo = std::min(x_lo, v); x_hi = std::max(x_hi, v); }
    for (double v : s.y) { y_lo = std::min(y_lo, v); y_hi = std::max(y_hi, v); }
  }
  if (!(x_hi > x_lo)) { x_lo -= 1.0; x_hi += 1.0; }
  if (!(y_hi > y_lo)) { y_lo -= 1.0; y_hi += 1.0; }
  const double y_pad = 0.06 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // axes box
  os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
     << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  const double xs = tick_step(x_lo, x_hi, 8);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9; t += xs) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << py(y_lo) << "\" x2=\"" << px(t)
       << "\" y2=\"" << py(y_lo) + 4 << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << px(t) << "\" y=\"" << py(y_lo) + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(t) << "</text>\n";
  }
  const double ys = tick_step(y_lo, y_hi, 6);
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9; t += ys) {
    os << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << py(t) << "\" x2=\""
       << kMarginLeft << "\" y2=\"" << py(t) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(t) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(t) << "</text>\n";
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << py(t) << "\" x2=\""
       << kMarginLeft + plot_w << "\" y2=\"" << py(t)
       << "\" stroke=\"#eee\"/>\n";
  }

  os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << x_label << "</text>\n";
  os << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">"
     << y_label << "</text>\n";

  double legend_x = kMarginLeft + 12;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.6\"";
    if (s.dashed) os << " stroke-dasharray=\"6,4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";

    os << "<line x1=\"" << legend_x << "\" y1=\"" << kMarginTop + 12
       << "\" x2=\"" << legend_x + 24 << "\" y2=\"" << kMarginTop + 12
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) os << " stroke-dasharray=\"6,4\"";
    os << "/>\n";
    os << "<text x=\"" << legend_x + 30 << "\" y=\"" << kMarginTop + 16
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
       << "</text>\n";
    legend_x += 30.0 + 8.0 * static_cast<double>(s.label.size()) + 24.0;
  }

  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> write_trace_plots(const SimTrace& trace,
                                           const std::string& out_dir) {
  if (trace.records.empty()) {
    throw ValidationError({"empty trace"});
  }
  std::filesystem::create_directories(out_dir);

  std::vector<double> t, y, lb, ub, tcab, mbl, sp, pcomp, pbl;
  for (const auto& r : trace.records) {
    t.push_back(r.t);
    y.push_back(r.y_pmv);
    lb.push_back(r.lb);
    ub.push_back(r.ub);
    tcab.push_back(r.state.t_cab - 273.15);
    mbl.push_back(r.control.m_bl);
    sp.push_back(r.control.t_evap_sp - 273.15);
    pcomp.push_back(r.p_comp);
    pbl.push_back(r.p_bl);
  }

  auto write = [&](const std::string& file, const std::string& svg) {
    const std::string path = out_dir + "/" + file;
    std::ofstream out(path, std::ios::binary);
    out << svg;
    return path;
  };

  std::vector<std::string> files;
  files.push_back(write(
      "pmv.svg",
      render_svg_panel("Occupant comfort index", "time [s]", "PMV",
                       {{"y_pmv", t, y},
                        {"upper bound", t, ub, "#555", true},
                        {"lower bound", t, lb, "#555", true}})));
  files.push_back(write(
      "cabin_temp.svg",
      render_svg_panel("Cabin air temperature", "time [s]", "T_cab [C]",
                       {{"t_cab", t, tcab, "#b2421f"}})));
  files.push_back(write(
      "controls.svg",
      render_svg_panel("Actuator commands", "time [s]",
                       "m_bl [kg/s] / T_evap_sp [C]",
                       {{"m_bl x100", t,
                         [&] {
                           std::vector<double> scaled;
                           for (double v : mbl) scaled.push_back(100.0 * v);
                           return scaled;
                         }(),
                         "#1f6fb2"},
                        {"t_evap_sp", t, sp, "#3d8f3d"}})));
  files.push_back(write(
      "powers.svg",
      render_svg_panel("Electrical powers", "time [s]", "power [W]",
                       {{"p_comp", t, pcomp, "#1f6fb2"},
                        {"p_bl", t, pbl, "#b2421f"}})));
  return files;
}

}  // namespace ceco
