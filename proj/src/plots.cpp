#include "etsmc/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "etsmc/trace_io.hpp"

namespace etsmc {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kTop + (y1 - y) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame frame_for(const std::vector<const Series*>& series, bool include_zero) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Series* s : series) {
    for (double x : s->x) f.x0 = std::min(f.x0, x), f.x1 = std::max(f.x1, x);
    for (double y : s->y) f.y0 = std::min(f.y0, y), f.y1 = std::max(f.y1, y);
  }
  if (!std::isfinite(f.x0)) f = {0.0, 1.0, 0.0, 1.0};
  if (include_zero) f.y0 = std::min(f.y0, 0.0), f.y1 = std::max(f.y1, 0.0);
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1.0;
  if (f.y1 <= f.y0) f.y0 -= 0.5, f.y1 += 0.5;
  const double pad = 0.05 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;
  return f;
}

void open_svg(std::ostringstream& o, const Frame& f, const std::string& title, const std::string& x_label,
              const std::string& y_label) {
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
    << "</text>\n";
  const double pl = kLeft, pr = kWidth - kRight, pt = kTop, pb = kHeight - kBottom;
  o << "<rect x=\"" << pl << "\" y=\"" << pt << "\" width=\"" << pr - pl << "\" height=\"" << pb - pt
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 5.0;
    o << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << pt << "\" x2=\"" << num(f.px(x)) << "\" y2=\"" << pb
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << num(f.px(x)) << "\" y=\"" << pb + 16 << "\" text-anchor=\"middle\">" << tick_label(x)
      << "</text>\n";
    o << "<line x1=\"" << pl << "\" y1=\"" << num(f.py(y)) << "\" x2=\"" << pr << "\" y2=\"" << num(f.py(y))
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << pl - 6 << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << tick_label(y)
      << "</text>\n";
  }
  o << "<text x=\"" << (pl + pr) / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << (pt + pb) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& o, int row, const Series& s) {
  const double x = kWidth - kRight + 12;
  const double y = kTop + 14 + 18 * row;
  o << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 22 << "\" y2=\"" << y - 4
    << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 3\"" : "")
    << "/>\n";
  o << "<text x=\"" << x + 28 << "\" y=\"" << y << "\">" << escape(s.label) << "</text>\n";
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
  std::vector<const Series*> ptrs;
  for (const auto& s : series) ptrs.push_back(&s);
  const Frame f = frame_for(ptrs, false);
  std::ostringstream o;
  open_svg(o, f, title, x_label, y_label);
  int row = 0;
  for (const auto& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      o << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << (i + 1 < n ? " " : "");
    }
    o << "\"/>\n";
    legend(o, row++, s);
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_stem_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const Series& stems) {
  const Frame f = frame_for({&stems}, true);
  std::ostringstream o;
  open_svg(o, f, title, x_label, y_label);
  const std::size_t n = std::min(stems.x.size(), stems.y.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.px(stems.x[i]);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(f.py(0.0)) << "\" x2=\"" << num(x) << "\" y2=\""
      << num(f.py(stems.y[i])) << "\" stroke=\"" << stems.color << "\"/>";
    o << "<circle cx=\"" << num(x) << "\" cy=\"" << num(f.py(stems.y[i])) << "\" r=\"2\" fill=\"" << stems.color
      << "\"/>\n";
  }
  legend(o, 0, stems);
  o << "</svg>\n";
  return o.str();
}

std::string angles_svg(const Trace& trace, const std::string& title) {
  Series q1{"theta1", "#1f77b4", {}, {}}, qd1{"theta_d1", "#1f77b4", {}, {}, true};
  Series q2{"theta2", "#d62728", {}, {}}, qd2{"theta_d2", "#d62728", {}, {}, true};
  for (const auto& r : trace) {
    for (Series* s : {&q1, &qd1, &q2, &qd2}) s->x.push_back(r.t);
    q1.y.push_back(r.theta1);
    qd1.y.push_back(r.theta_d1);
    q2.y.push_back(r.theta2);
    qd2.y.push_back(r.theta_d2);
  }
  return svg_line_chart(title, "t [s]", "angle [rad]", {q1, qd1, q2, qd2});
}

std::string errors_svg(const Trace& trace, const std::string& title) {
  Series e1{"err1", "#1f77b4", {}, {}}, e2{"err2", "#d62728", {}, {}};
  for (const auto& r : trace) {
    e1.x.push_back(r.t);
    e2.x.push_back(r.t);
    e1.y.push_back(r.err1);
    e2.y.push_back(r.err2);
  }
  return svg_line_chart(title, "t [s]", "tracking error [rad]", {e1, e2});
}

std::string inter_event_svg(const Trace& trace, const std::string& title) {
  Series stems{"inter-event", "#2ca02c", {}, {}};
  const TraceSummary s = summarize(trace);
  for (std::size_t i = 0; i < s.inter_event_times.size(); ++i) {
    stems.x.push_back(s.trigger_times[i + 1]);
    stems.y.push_back(s.inter_event_times[i]);
  }
  return svg_stem_chart(title, "t [s]", "inter-event time [s]", stems);
}

std::vector<std::string> emit_plots(const Trace& trace, const std::string& out_dir, const std::string& tag) {
  if (trace.empty()) throw std::invalid_argument("emit_plots: empty trace");
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  const std::string a = (dir / ("angles_" + tag + ".svg")).string();
  const std::string e = (dir / ("errors_" + tag + ".svg")).string();
  write_text(a, angles_svg(trace, "joint angles (" + tag + ")"));
  write_text(e, errors_svg(trace, "tracking errors (" + tag + ")"));
  return {a, e};
}

std::vector<std::string> emit_comparison_plots(const Trace& tt, const Trace& et, const std::string& out_dir) {
  auto paths = emit_plots(tt, out_dir, "tt");
  for (auto& p : emit_plots(et, out_dir, "et")) paths.push_back(std::move(p));
  const std::string ie = (std::filesystem::path(out_dir) / "inter_event.svg").string();
  write_text(ie, inter_event_svg(et, "inter-event times (et)"));
  paths.push_back(ie);
  return paths;
}

}  // namespace etsmc
