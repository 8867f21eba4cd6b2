#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "etsmc/control_laws.hpp"

namespace etsmc {

struct TriggerParams {
  double eta = 0.3;
  double L_const = 0.85;
  double c = 30.0;
  double error_radius = 0.2;
  double lambda_est = 1.0;
  double h_bound = 1.0;
  double d0_bound = 0.5;
  /// Bound on ||g_x||; unset means "sweep the default joint range".
  std::optional<double> g0_bound;

  void validate() const;
};

struct TriggerStats {
  std::size_t trigger_count = 0;
  std::size_t sample_count = 0;
  std::optional<double> last_time;
  std::vector<double> trigger_times;
  std::vector<double> inter_event_times;

  double min_inter_event() const;
  double max_inter_event() const;
  double mean_inter_event() const;
};

struct ZenoBound {
  double seconds = 0.0;
  bool nonpositive = false;  ///< ln argument <= 1
};

/// Frobenius norm of epsilon_held - epsilon_now.
double event_error(const ErrorMatrix& epsilon_held, const ErrorMatrix& epsilon_now);
/// Dynamic-size overload; throws InvalidState on a shape mismatch.
double event_error(const Eigen::MatrixXd& epsilon_held, const Eigen::MatrixXd& epsilon_now);

/// eta / (L sqrt(1 + c^2)).
double threshold(const TriggerParams& tp);

bool should_trigger(double e_norm, double x_tilde_norm, const TriggerParams& tp);

/// (1/lambda) ln(error_radius + h + d0 + threshold).
ZenoBound zeno_bound(const TriggerParams& tp);

/// Counts one sampling instant; throws InvalidState if t precedes the last call.
TriggerStats record_step(TriggerStats stats, double t, bool triggered);
void record_step_inplace(TriggerStats& stats, double t, bool triggered);

}  // namespace etsmc
