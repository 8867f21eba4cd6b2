#pragma once

#include <string>

#include "etsmc/sim_engine.hpp"

namespace etsmc {

/// Flat `prefix.key=value` lines for one trace.
std::string summary_kv(const TraceSummary& s, const std::string& prefix);
std::string summary_text(const TraceSummary& s);

std::string report_kv(const ComparisonReport& r);
std::string report_text(const ComparisonReport& r);

}  // namespace etsmc
