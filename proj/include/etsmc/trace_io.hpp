#pragma once

#include <string>

#include "etsmc/sim_engine.hpp"

namespace etsmc {

inline constexpr const char* kTraceHeader =
    "t_s,theta1_rad,theta2_rad,theta_d1_rad,theta_d2_rad,err1_rad,err2_rad,s_norm,e_norm,"
    "triggered,U_v1_V,U_v2_V,delta1_m,delta2_m,V_x";

/// CSV text: header plus one LF-terminated row per record, doubles in
/// shortest round-trip form.
std::string format_trace(const Trace& trace);
Trace parse_trace(const std::string& text);

void write_trace(const Trace& trace, const std::string& path);
/// Throws std::runtime_error when the file is missing or malformed.
Trace read_trace(const std::string& path);

/// Writes `text` to `path` byte for byte.
void write_text(const std::string& path, const std::string& text);

}  // namespace etsmc
