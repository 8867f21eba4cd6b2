#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "etsmc/control_laws.hpp"
#include "etsmc/event_trigger.hpp"
#include "etsmc/limb_dynamics.hpp"
#include "etsmc/sea_actuator.hpp"
#include "etsmc/trajectory.hpp"

namespace etsmc {

using StateVec = Eigen::Matrix<double, 8, 1>;

struct PlantState {
  Vec2 theta = Vec2::Zero();
  Vec2 omega = Vec2::Zero();
  Vec2 nut_position = Vec2::Zero();
  Vec2 nut_velocity = Vec2::Zero();

  StateVec pack() const;
  static PlantState unpack(const StateVec& x);
};

enum class ControllerKind { TimeTriggered, EventTriggered };

/// Which signal is frozen between triggers.
enum class HoldMode { VxOnly, FullUv };

/// How the nut is placed at t = 0 once theta(0) = x_d(0), omega(0) = x_d_dot(0).
enum class InitMode {
  ZeroDeformation,  ///< Delta(0) = 0, r_dot(0) = 0
  Balanced,         ///< Delta(0) solves f_x + g_x Delta = x_d_ddot(0), Delta_dot(0) = 0
};

struct DisturbanceSpec {
  double d0 = 0.01;  ///< bound on |d_i(t)| [N m]
  int num_harmonics = 3;
  double freq_min = 0.05;  ///< [Hz]
  double freq_max = 0.5;   ///< [Hz]

  void validate() const;
};

/// Seeded harmonic joint disturbance. Amplitudes are normalised to sum to d0
/// per joint, so |d_i(t)| <= d0 for every t.
class Disturbance {
 public:
  Disturbance() = default;
  Disturbance(const DisturbanceSpec& spec, std::uint64_t seed);
  Vec2 at(double t) const;

 private:
  struct Harmonic {
    double amplitude;
    double omega;  // [rad/s]
    double phase;
  };
  std::vector<Harmonic> joint_[2];
};

Vec2 disturbance_torque(double t, const DisturbanceSpec& spec, std::uint64_t seed);

struct SimConfig {
  double duration = 10.0;
  double integration_step = 1e-3;
  double sampling_period = 1e-2;
  ControllerKind controller_kind = ControllerKind::EventTriggered;
  std::uint64_t seed = 1;
  DisturbanceSpec disturbance;
  HoldMode hold_mode = HoldMode::VxOnly;
  InitMode init_mode = InitMode::ZeroDeformation;
  std::optional<PlantState> initial_state;
  /// Abort when ||state|| exceeds this.
  double divergence_norm = 1e6;

  void validate() const;
  int sample_count() const;
  int substeps() const;
};

/// Everything the plant and controller need besides the run protocol.
struct Model {
  LimbParams limb;
  SeaParams sea;
  GainSet gains;
  TriggerParams trigger;
  Trajectory trajectory;

  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta_d1 = 0.0;
  double theta_d2 = 0.0;
  double err1 = 0.0;
  double err2 = 0.0;
  double s_norm = 0.0;
  double e_norm = 0.0;  ///< event error after the snapshot refresh (0 on trigger rows)
  int triggered = 0;
  double U_v1 = 0.0;
  double U_v2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double V_x = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

using Trace = std::vector<TraceRecord>;

struct RunResult {
  Trace trace;
  TriggerStats stats;
  /// ||[x_tilde1; x_tilde2]|| per sample (not part of the CSV contract).
  std::vector<double> x_tilde_norm;
  /// Event error seen by the trigger rule, before any refresh.
  std::vector<double> e_norm_pre;
  PlantState final_state;
};

/// State derivative of the coupled plant for a held input voltage.
StateVec plant_derivative(const StateVec& x, const Vec2& u_v, const Vec2& disturbance,
                          const Model& m);

/// Classical RK4 step with U_v held over [t, t+h] and the disturbance sampled
/// at the RK4 stage times. Throws DivergenceError on non-finite output.
PlantState rk4_step(const PlantState& state, const Vec2& u_v, double t, double h, const Model& m,
                    const Disturbance& dist);

/// Starting state implied by the config (reference_lengths must already be set).
PlantState initial_state(const SimConfig& cfg, const Model& m);

/// Copy of the model with reference_lengths filled from theta(0) when unset.
Model prepared_model(const SimConfig& cfg, const Model& m);

RunResult run(const SimConfig& cfg, const Model& m);

/// Statistics recomputed from a trace alone.
struct TraceSummary {
  std::size_t sample_count = 0;
  std::size_t trigger_count = 0;
  Vec2 max_abs_err = Vec2::Zero();
  Vec2 max_err_time = Vec2::Zero();
  double min_inter_event = 0.0;
  double max_inter_event = 0.0;
  double mean_inter_event = 0.0;
  std::vector<double> inter_event_times;
  std::vector<double> trigger_times;

  double max_err() const { return max_abs_err.maxCoeff(); }
  int worst_joint() const { return max_abs_err[1] > max_abs_err[0] ? 1 : 0; }
};

TraceSummary summarize(const Trace& trace);

struct ComparisonReport {
  TraceSummary tt;
  TraceSummary et;
  double reduction_factor = 0.0;
  double err_ratio = 0.0;  ///< et max error / tt max error (both over joints)
  ZenoBound zeno;
  double threshold = 0.0;
  /// Distance from each controller's peak-error time to the nearest velocity
  /// reversal of the joint where the peak occurs [s].
  double tt_peak_reversal_gap = 0.0;
  double et_peak_reversal_gap = 0.0;
  RunResult tt_run;
  RunResult et_run;
};

ComparisonReport compare(const SimConfig& base, const Model& m);

/// Times in [0, horizon] (on a grid of step dt) where x_d_dot of `joint` changes
/// sign or vanishes.
std::vector<double> velocity_reversals(const Trajectory& traj, Joint joint, double horizon,
                                       double dt);

/// sup ||M^-1||_2 over knee angles in the joint range.
double inverse_inertia_bound(const LimbParams& p, int n = 1001);

/// sup ||g_x||_2 over the joint-range grid.
double input_gain_bound(const LimbParams& p, int n = 101);

/// Actuator-bypassed reaching-law check: v_x drives Delta directly, the law is
/// re-evaluated every integration step (continuous triggering), d is a joint
/// torque with ||d|| <= d0 and rho = g0 d0 + eta with g0 = sup ||M^-1||.
/// V_x is sampled every `sample_every` steps.
struct DescentCheck {
  std::size_t checked = 0;     ///< samples with ||s|| > s_floor
  std::size_t violations = 0;  ///< of those, samples with dV/dt >= 0
  double worst_rate = 0.0;     ///< max dV/dt among checked samples
  double rho = 0.0;
};

struct DescentConfig {
  double duration = 0.25;
  double step = 5e-6;
  int sample_every = 20;
  double s_floor = 1e-3;
  double boundary_layer = 5e-4;
  double d0 = 0.5;
  double eta = 0.3;
  /// initial tracking error is drawn uniformly with these half-widths
  double theta_spread = 0.05;
  double omega_spread = 0.5;
};

DescentCheck reduced_descent_check(const Model& m, const DescentConfig& dc, std::uint64_t seed);

}  // namespace etsmc
