#include "etsmc/report.hpp"

#include <cstdio>
#include <sstream>

#include "etsmc/format.hpp"

namespace etsmc {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string summary_kv(const TraceSummary& s, const std::string& prefix) {
  std::ostringstream o;
  const std::string p = prefix.empty() ? "" : prefix + ".";
  o << p << "sample_count=" << s.sample_count << '\n';
  o << p << "trigger_count=" << s.trigger_count << '\n';
  o << p << "max_err1=" << format_double(s.max_abs_err[0]) << '\n';
  o << p << "max_err2=" << format_double(s.max_abs_err[1]) << '\n';
  o << p << "max_err_time1=" << format_double(s.max_err_time[0]) << '\n';
  o << p << "max_err_time2=" << format_double(s.max_err_time[1]) << '\n';
  o << p << "min_inter_event=" << format_double(s.min_inter_event) << '\n';
  o << p << "max_inter_event=" << format_double(s.max_inter_event) << '\n';
  o << p << "mean_inter_event=" << format_double(s.mean_inter_event) << '\n';
  return o.str();
}

std::string summary_text(const TraceSummary& s) {
  std::ostringstream o;
  o << "samples            " << s.sample_count << '\n';
  o << "triggers           " << s.trigger_count << '\n';
  o << "max |err| hip      " << fixed(s.max_abs_err[0], 5) << " rad at t = " << fixed(s.max_err_time[0], 2)
    << " s\n";
  o << "max |err| knee     " << fixed(s.max_abs_err[1], 5) << " rad at t = " << fixed(s.max_err_time[1], 2)
    << " s\n";
  o << "inter-event [s]    min " << fixed(s.min_inter_event, 3) << "  mean " << fixed(s.mean_inter_event, 4)
    << "  max " << fixed(s.max_inter_event, 3) << '\n';
  return o.str();
}

std::string report_kv(const ComparisonReport& r) {
  std::ostringstream o;
  o << summary_kv(r.tt, "tt") << summary_kv(r.et, "et");
  o << "reduction_factor=" << format_double(r.reduction_factor) << '\n';
  o << "err_ratio=" << format_double(r.err_ratio) << '\n';
  o << "threshold=" << format_double(r.threshold) << '\n';
  o << "zeno_bound=" << format_double(r.zeno.seconds) << '\n';
  o << "zeno_warning=" << (r.zeno.nonpositive ? 1 : 0) << '\n';
  o << "tt_peak_reversal_gap=" << format_double(r.tt_peak_reversal_gap) << '\n';
  o << "et_peak_reversal_gap=" << format_double(r.et_peak_reversal_gap) << '\n';
  return o.str();
}

std::string report_text(const ComparisonReport& r) {
  std::ostringstream o;
  o << "time-triggered SMC\n" << summary_text(r.tt) << '\n';
  o << "event-triggered SMC\n" << summary_text(r.et) << '\n';
  o << "reduction factor   " << fixed(r.reduction_factor, 3) << '\n';
  o << "error ratio ET/TT  " << fixed(r.err_ratio, 4) << '\n';
  o << "peak-to-reversal   TT " << fixed(r.tt_peak_reversal_gap, 3) << " s, ET "
    << fixed(r.et_peak_reversal_gap, 3) << " s\n";
  o << "trigger threshold  " << fixed(r.threshold, 6) << '\n';
  o << "Zeno lower bound   " << fixed(r.zeno.seconds, 4) << " s";
  if (r.zeno.nonpositive) o << "  (warning: nonpositive)";
  o << "  measured min " << fixed(r.et.min_inter_event, 3) << " s\n";
  return o.str();
}

}  // namespace etsmc
