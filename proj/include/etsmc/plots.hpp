#pragma once

#include <string>
#include <vector>

#include "etsmc/sim_engine.hpp"

namespace etsmc {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Standalone SVG line chart.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);
/// Standalone SVG stem chart (one vertical stem per point).
std::string svg_stem_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const Series& stems);

std::string angles_svg(const Trace& trace, const std::string& title);
std::string errors_svg(const Trace& trace, const std::string& title);
std::string inter_event_svg(const Trace& trace, const std::string& title);

/// angles_<tag>.svg and errors_<tag>.svg; returns the written paths.
std::vector<std::string> emit_plots(const Trace& trace, const std::string& out_dir,
                                    const std::string& tag);
/// Both pairs plus inter_event.svg for the event-triggered trace.
std::vector<std::string> emit_comparison_plots(const Trace& tt, const Trace& et,
                                               const std::string& out_dir);

}  // namespace etsmc
