#include "etsmc/event_trigger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "etsmc/errors.hpp"

namespace etsmc {

void TriggerParams::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be finite and > 0");
  };
  positive(eta, "trigger.eta");
  positive(L_const, "trigger.L");
  positive(error_radius, "trigger.error_radius");
  positive(lambda_est, "trigger.lambda");
  if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("gains.c", "must be finite");
  if (!(h_bound >= 0.0) || !std::isfinite(h_bound)) {
    throw ConfigError("trigger.h", "must be finite and >= 0");
  }
  if (!(d0_bound >= 0.0) || !std::isfinite(d0_bound)) {
    throw ConfigError("trigger.d0", "must be finite and >= 0");
  }
  if (g0_bound && (!(*g0_bound > 0.0) || !std::isfinite(*g0_bound))) {
    throw ConfigError("trigger.g0", "must be finite and > 0");
  }
}

double TriggerStats::min_inter_event() const {
  if (inter_event_times.empty()) return 0.0;
  return *std::min_element(inter_event_times.begin(), inter_event_times.end());
}

double TriggerStats::max_inter_event() const {
  if (inter_event_times.empty()) return 0.0;
  return *std::max_element(inter_event_times.begin(), inter_event_times.end());
}

double TriggerStats::mean_inter_event() const {
  if (inter_event_times.empty()) return 0.0;
  return std::accumulate(inter_event_times.begin(), inter_event_times.end(), 0.0) /
         static_cast<double>(inter_event_times.size());
}

double event_error(const ErrorMatrix& epsilon_held, const ErrorMatrix& epsilon_now) {
  return (epsilon_held - epsilon_now).norm();
}

double event_error(const Eigen::MatrixXd& epsilon_held, const Eigen::MatrixXd& epsilon_now) {
  if (epsilon_held.rows() != epsilon_now.rows() || epsilon_held.cols() != epsilon_now.cols()) {
    throw InvalidState("event error: shape mismatch");
  }
  if (!epsilon_held.allFinite() || !epsilon_now.allFinite()) {
    throw InvalidState("event error: non-finite entry");
  }
  return (epsilon_held - epsilon_now).norm();
}

double threshold(const TriggerParams& tp) {
  return tp.eta / (tp.L_const * std::sqrt(1.0 + tp.c * tp.c));
}

bool should_trigger(double e_norm, double x_tilde_norm, const TriggerParams& tp) {
  return e_norm >= threshold(tp) || x_tilde_norm > tp.error_radius;
}

ZenoBound zeno_bound(const TriggerParams& tp) {
  const double arg = tp.error_radius + tp.h_bound + tp.d0_bound + threshold(tp);
  ZenoBound z;
  z.seconds = std::log(arg) / tp.lambda_est;
  z.nonpositive = !(z.seconds > 0.0);
  return z;
}

void record_step_inplace(TriggerStats& stats, double t, bool triggered) {
  if (!std::isfinite(t)) throw InvalidState("record_step: non-finite time");
  if (stats.last_time && t < *stats.last_time) {
    throw InvalidState("record_step: time regression");
  }
  stats.last_time = t;
  ++stats.sample_count;
  if (!triggered) return;
  if (!stats.trigger_times.empty()) {
    stats.inter_event_times.push_back(t - stats.trigger_times.back());
  }
  stats.trigger_times.push_back(t);
  ++stats.trigger_count;
}

TriggerStats record_step(TriggerStats stats, double t, bool triggered) {
  record_step_inplace(stats, t, triggered);
  return stats;
}

}  // namespace etsmc
