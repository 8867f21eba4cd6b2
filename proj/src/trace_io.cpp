#include "etsmc/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "etsmc/format.hpp"

namespace etsmc {

std::string format_trace(const Trace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  out.reserve(trace.size() * 200);
  for (const auto& r : trace) {
    const double vals[] = {r.t,      r.theta1, r.theta2, r.theta_d1, r.theta_d2,
                           r.err1,   r.err2,   r.s_norm, r.e_norm};
    for (double v : vals) {
      out += format_double(v);
      out += ',';
    }
    out += r.triggered ? '1' : '0';
    for (double v : {r.U_v1, r.U_v2, r.delta1, r.delta2, r.V_x}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: missing or unexpected header");
  }
  Trace trace;
  std::vector<std::string> cells;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    cells.clear();
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 15) {
      throw std::runtime_error("trace: line " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " fields");
    }
    try {
      TraceRecord r;
      double* dst[] = {&r.t,      &r.theta1, &r.theta2, &r.theta_d1, &r.theta_d2,
                       &r.err1,   &r.err2,   &r.s_norm, &r.e_norm};
      for (int i = 0; i < 9; ++i) *dst[i] = parse_double(cells[i]);
      if (cells[9] != "0" && cells[9] != "1") throw std::invalid_argument("triggered must be 0 or 1");
      r.triggered = cells[9] == "1" ? 1 : 0;
      double* tail[] = {&r.U_v1, &r.U_v2, &r.delta1, &r.delta2, &r.V_x};
      for (int i = 0; i < 5; ++i) *tail[i] = parse_double(cells[10 + i]);
      if (!trace.empty() && !(r.t > trace.back().t)) throw std::invalid_argument("time not increasing");
      trace.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("trace: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trace;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_trace(const Trace& trace, const std::string& path) { write_text(path, format_trace(trace)); }

Trace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read trace " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

}  // namespace etsmc
