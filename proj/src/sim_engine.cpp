#include "etsmc/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "etsmc/errors.hpp"

namespace etsmc {
namespace {

// Uniform [0, 1) from the top 53 bits; std distributions are not portable
// across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

void guard(const StateVec& x, double t, double limit) {
  if (!x.allFinite()) throw DivergenceError("non-finite plant state at t=" + std::to_string(t), t);
  if (x.norm() > limit) {
    throw DivergenceError("plant state norm exceeded guard at t=" + std::to_string(t), t);
  }
}

}  // namespace

StateVec PlantState::pack() const {
  StateVec x;
  x << theta, omega, nut_position, nut_velocity;
  return x;
}

PlantState PlantState::unpack(const StateVec& x) {
  PlantState s;
  s.theta = x.segment<2>(0);
  s.omega = x.segment<2>(2);
  s.nut_position = x.segment<2>(4);
  s.nut_velocity = x.segment<2>(6);
  return s;
}

void DisturbanceSpec::validate() const {
  if (!(d0 >= 0.0) || !std::isfinite(d0)) throw ConfigError("sim.disturbance_d0", "must be >= 0");
  if (num_harmonics < 1 || num_harmonics > 64) {
    throw ConfigError("sim.disturbance_harmonics", "must be in [1, 64]");
  }
  if (!(freq_min > 0.0) || !(freq_max >= freq_min) || !std::isfinite(freq_max)) {
    throw ConfigError("sim.disturbance_fmin", "need 0 < fmin <= fmax");
  }
}

Disturbance::Disturbance(const DisturbanceSpec& spec, std::uint64_t seed) {
  if (spec.d0 == 0.0) return;
  std::mt19937_64 rng(seed);
  for (auto& joint : joint_) {
    double total = 0.0;
    for (int k = 0; k < spec.num_harmonics; ++k) {
      Harmonic h{};
      h.amplitude = uniform(rng, 0.2, 1.0);
      h.omega = 2.0 * std::numbers::pi * uniform(rng, spec.freq_min, spec.freq_max);
      h.phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      total += h.amplitude;
      joint.push_back(h);
    }
    for (auto& h : joint) h.amplitude *= spec.d0 / total;
  }
}

Vec2 Disturbance::at(double t) const {
  Vec2 d = Vec2::Zero();
  for (int j = 0; j < 2; ++j) {
    for (const auto& h : joint_[j]) d[j] += h.amplitude * std::sin(h.omega * t + h.phase);
  }
  return d;
}

Vec2 disturbance_torque(double t, const DisturbanceSpec& spec, std::uint64_t seed) {
  return Disturbance(spec, seed).at(t);
}

void SimConfig::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("sim.duration", "must be > 0");
  if (!(integration_step > 0.0)) throw ConfigError("sim.integration_step", "must be > 0");
  if (!(sampling_period > 0.0)) throw ConfigError("sim.sampling_period", "must be > 0");
  const double ratio = sampling_period / integration_step;
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("sim.sampling_period", "must be an integer multiple of sim.integration_step");
  }
  if (sample_count() < 1) throw ConfigError("sim.duration", "shorter than one sampling period");
  if (!(divergence_norm > 0.0)) throw ConfigError("sim.divergence_norm", "must be > 0");
  disturbance.validate();
}

int SimConfig::sample_count() const {
  return static_cast<int>(std::llround(duration / sampling_period));
}

int SimConfig::substeps() const {
  return static_cast<int>(std::llround(sampling_period / integration_step));
}

void Model::validate() const {
  limb.validate();
  sea.validate();
  gains.validate();
  trigger.validate();
  if (!trajectory.tabulated()) trajectory.gait().validate();
}

StateVec plant_derivative(const StateVec& x, const Vec2& u_v, const Vec2& disturbance,
                          const Model& m) {
  const PlantState s = PlantState::unpack(x);
  const Vec2 delta = deformation(s.theta, s.nut_position, m.limb, m.sea);
  StateVec dx;
  dx.segment<2>(0) = s.omega;
  dx.segment<2>(2) = joint_accel(s.theta, s.omega, delta, disturbance, m.limb);
  dx.segment<2>(4) = s.nut_velocity;
  dx.segment<2>(6) = nut_accel(s.nut_velocity, u_v, m.sea);
  return dx;
}

PlantState rk4_step(const PlantState& state, const Vec2& u_v, double t, double h, const Model& m,
                    const Disturbance& dist) {
  if (!(h > 0.0)) throw InvalidState("rk4_step: h must be > 0");
  const StateVec x = state.pack();
  const Vec2 d0 = dist.at(t);
  const Vec2 dm = dist.at(t + 0.5 * h);
  const Vec2 d1 = dist.at(t + h);
  StateVec k1, k2, k3, k4;
  try {
    k1 = plant_derivative(x, u_v, d0, m);
    k2 = plant_derivative(x + 0.5 * h * k1, u_v, dm, m);
    k3 = plant_derivative(x + 0.5 * h * k2, u_v, dm, m);
    k4 = plant_derivative(x + h * k3, u_v, d1, m);
  } catch (const InvalidState& e) {
    throw DivergenceError(std::string("non-finite derivative: ") + e.what(), t);
  } catch (const DegenerateGeometry& e) {
    throw DivergenceError(std::string("geometry left valid region: ") + e.what(), t);
  }
  const StateVec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  guard(next, t + h, std::numeric_limits<double>::infinity());
  return PlantState::unpack(next);
}

Model prepared_model(const SimConfig& cfg, const Model& m) {
  Model out = m;
  out.trigger.c = out.gains.c;
  if (!out.sea.reference_lengths) {
    const Vec2 theta0 = cfg.initial_state ? cfg.initial_state->theta : m.trajectory.at(0.0).x_d;
    out.sea.reference_lengths = sea_lengths(theta0, m.limb);
  }
  return out;
}

PlantState initial_state(const SimConfig& cfg, const Model& m) {
  if (cfg.initial_state) return *cfg.initial_state;
  const DesiredPoint d = m.trajectory.at(0.0);
  PlantState s;
  s.theta = d.x_d;
  s.omega = d.x_d_dot;
  const Vec2 r_b = end_effector_disp(s.theta, m.limb, m.sea);
  if (cfg.init_mode == InitMode::ZeroDeformation) {
    s.nut_position = r_b;
    s.nut_velocity = Vec2::Zero();
  } else {
    const DriftAndInput fg = fx_gx(s.theta, s.omega, m.limb);
    const Vec2 delta0 = fg.g_x.partialPivLu().solve(d.x_d_ddot - fg.f_x);
    s.nut_position = r_b - delta0;
    s.nut_velocity = sea_jacobian(s.theta, m.limb).cwiseProduct(s.omega);
  }
  return s;
}

RunResult run(const SimConfig& cfg, const Model& model_in) {
  cfg.validate();
  const Model m = prepared_model(cfg, model_in);
  m.validate();

  const int n = cfg.sample_count();
  const int sub = cfg.substeps();
  const double ts = cfg.sampling_period;
  const double h = ts / sub;
  const bool event = cfg.controller_kind == ControllerKind::EventTriggered;
  const Disturbance dist(cfg.disturbance, cfg.seed);

  RunResult out;
  out.trace.reserve(n);
  out.x_tilde_norm.reserve(n);
  out.e_norm_pre.reserve(n);

  PlantState x = initial_state(cfg, m);
  guard(x.pack(), 0.0, cfg.divergence_norm);

  HeldSnapshot held;
  Vec2 u_v = Vec2::Zero();
  Vec2 prev_vx = Vec2::Zero();
  Vec2 prev_v1 = Vec2::Zero();
  double prev_inner_t = 0.0;
  bool have_inner = false;

  for (int k = 0; k < n; ++k) {
    const double t = k * ts;
    const DesiredPoint d = m.trajectory.at(t);
    const ErrorState err = ErrorState::from(x.theta, x.omega, d.x_d, d.x_d_dot, d.x_d_ddot);
    DriftAndInput fg;
    try {
      fg = fx_gx(x.theta, x.omega, m.limb);
    } catch (const std::domain_error& e) {
      throw DivergenceError(std::string("controller evaluation failed: ") + e.what(), t);
    }
    const Vec2 s = sliding_surface(err, m.gains.c);
    const ErrorMatrix eps = err.extended();
    const double xn = err.tracking_norm();
    const double e_pre = k == 0 ? 0.0 : event_error(held.epsilon_held, eps);
    const bool triggered = k == 0 || !event || should_trigger(e_pre, xn, m.trigger);
    if (triggered) held = held_law(err, fg.f_x, fg.g_x, m.gains, t);

    if (cfg.hold_mode == HoldMode::VxOnly || triggered) {
      const double dt_inner = have_inner ? t - prev_inner_t : ts;
      const Vec2 z1 = deformation(x.theta, x.nut_position, m.limb, m.sea);
      const Vec2 z2 = deformation_rate(x.theta, x.omega, x.nut_velocity, m.limb);
      Vec2 vx_rate = Vec2::Zero();
      if (have_inner && m.gains.vx_rate == VxRate::BackwardDifference) {
        vx_rate = (held.v_x_held - prev_vx) / dt_inner;
      }
      const Vec2 v1 = backstep_stage1(held, vx_rate, z1, s, fg.g_x, m.gains);
      const Vec2 v1_rate = have_inner ? Vec2((v1 - prev_v1) / dt_inner) : Vec2::Zero();
      const Vec2 accel = fg.f_x + fg.g_x * z1;
      const Vec2 f2 = end_effector_accel(x.theta, x.omega, accel, m.limb, m.sea) +
                      m.sea.motor_gain_damping * x.nut_velocity;
      u_v = backstep_stage2(v1, v1_rate, z2, f2, held, z1, m.gains.kp2);
      prev_vx = held.v_x_held;
      prev_v1 = v1;
      prev_inner_t = t;
      have_inner = true;
    }

    TraceRecord rec;
    rec.t = t;
    rec.theta1 = x.theta[0];
    rec.theta2 = x.theta[1];
    rec.theta_d1 = d.x_d[0];
    rec.theta_d2 = d.x_d[1];
    rec.err1 = err.x_tilde1[0];
    rec.err2 = err.x_tilde1[1];
    rec.s_norm = s.norm();
    rec.e_norm = triggered ? event_error(held.epsilon_held, eps) : e_pre;
    rec.triggered = triggered ? 1 : 0;
    rec.U_v1 = u_v[0];
    rec.U_v2 = u_v[1];
    const Vec2 delta = deformation(x.theta, x.nut_position, m.limb, m.sea);
    rec.delta1 = delta[0];
    rec.delta2 = delta[1];
    rec.V_x = 0.5 * s.squaredNorm();
    out.trace.push_back(rec);
    out.x_tilde_norm.push_back(xn);
    out.e_norm_pre.push_back(e_pre);
    record_step_inplace(out.stats, t, triggered);

    for (int i = 0; i < sub; ++i) {
      const double tt = t + i * h;
      x = rk4_step(x, u_v, tt, h, m, dist);
      guard(x.pack(), tt + h, cfg.divergence_norm);
      if ((x.nut_velocity.array().abs() > m.sea.slew_limit).any()) {
        throw DivergenceError("nut velocity exceeded sea.slew_limit at t=" + std::to_string(tt + h),
                              tt + h);
      }
    }
  }
  out.final_state = x;
  return out;
}

TraceSummary summarize(const Trace& trace) {
  TraceSummary s;
  s.sample_count = trace.size();
  for (const auto& r : trace) {
    const double e[2] = {std::abs(r.err1), std::abs(r.err2)};
    for (int j = 0; j < 2; ++j) {
      if (e[j] > s.max_abs_err[j]) {
        s.max_abs_err[j] = e[j];
        s.max_err_time[j] = r.t;
      }
    }
    if (r.triggered) {
      if (!s.trigger_times.empty()) s.inter_event_times.push_back(r.t - s.trigger_times.back());
      s.trigger_times.push_back(r.t);
    }
  }
  s.trigger_count = s.trigger_times.size();
  if (!s.inter_event_times.empty()) {
    const auto& v = s.inter_event_times;
    s.min_inter_event = *std::min_element(v.begin(), v.end());
    s.max_inter_event = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_inter_event = sum / static_cast<double>(v.size());
  }
  return s;
}

std::vector<double> velocity_reversals(const Trajectory& traj, Joint joint, double horizon,
                                       double dt) {
  std::vector<double> out;
  const int j = index(joint);
  const int n = static_cast<int>(std::floor(horizon / dt + 1e-9));
  double prev = traj.at(0.0).x_d_dot[j];
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) scale = std::max(scale, std::abs(traj.at(i * dt).x_d_dot[j]));
  const double tiny = 1e-12 * std::max(scale, 1e-300);
  if (std::abs(prev) <= tiny) out.push_back(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = i * dt;
    const double v = traj.at(t).x_d_dot[j];
    if (std::abs(v) <= tiny) {
      out.push_back(t);
    } else if (std::abs(prev) > tiny && (v > 0.0) != (prev > 0.0)) {
      // linear interpolation of the crossing
      out.push_back(t - dt * v / (v - prev));
    }
    prev = v;
  }
  return out;
}

namespace {

double reversal_gap(const TraceSummary& s, const Trajectory& traj, double horizon, double dt) {
  const int j = s.worst_joint();
  const auto rev = velocity_reversals(traj, j == 0 ? Joint::Hip : Joint::Knee, horizon, dt);
  double gap = std::numeric_limits<double>::infinity();
  for (double r : rev) gap = std::min(gap, std::abs(r - s.max_err_time[j]));
  return gap;
}

}  // namespace

ComparisonReport compare(const SimConfig& base, const Model& m) {
  ComparisonReport rep;
  SimConfig tt = base;
  tt.controller_kind = ControllerKind::TimeTriggered;
  SimConfig et = base;
  et.controller_kind = ControllerKind::EventTriggered;
  rep.tt_run = run(tt, m);
  rep.et_run = run(et, m);
  rep.tt = summarize(rep.tt_run.trace);
  rep.et = summarize(rep.et_run.trace);
  rep.reduction_factor = rep.et.trigger_count == 0
                             ? 0.0
                             : static_cast<double>(rep.tt.trigger_count) /
                                   static_cast<double>(rep.et.trigger_count);
  rep.err_ratio = rep.tt.max_err() > 0.0 ? rep.et.max_err() / rep.tt.max_err()
                                         : std::numeric_limits<double>::infinity();
  const Model pm = prepared_model(base, m);
  rep.threshold = threshold(pm.trigger);
  rep.zeno = zeno_bound(pm.trigger);
  const double horizon = base.duration;
  const double dt = base.sampling_period / 10.0;
  rep.tt_peak_reversal_gap = reversal_gap(rep.tt, m.trajectory, horizon, dt);
  rep.et_peak_reversal_gap = reversal_gap(rep.et, m.trajectory, horizon, dt);
  return rep;
}

double inverse_inertia_bound(const LimbParams& p, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q2 = p.joint_min[1] + (p.joint_max[1] - p.joint_min[1]) * i / (n - 1);
    const Mat2 minv = mass_matrix(Vec2(0.0, q2), p).matrix().inverse();
    best = std::max(best, minv.operatorNorm());
  }
  return best;
}

double input_gain_bound(const LimbParams& p, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Vec2 q{p.joint_min[0] + (p.joint_max[0] - p.joint_min[0]) * i / (n - 1),
                   p.joint_min[1] + (p.joint_max[1] - p.joint_min[1]) * k / (n - 1)};
      best = std::max(best, fx_gx(q, Vec2::Zero(), p).g_x.operatorNorm());
    }
  }
  return best;
}

DescentCheck reduced_descent_check(const Model& m, const DescentConfig& dc, std::uint64_t seed) {
  if (!(dc.step > 0.0) || dc.sample_every < 1) throw InvalidState("descent check: bad step");
  DescentCheck out;
  const double g0 = inverse_inertia_bound(m.limb);
  out.rho = g0 * dc.d0 + dc.eta;
  GainSet gains = m.gains;
  gains.rho = out.rho;
  gains.boundary_layer = dc.boundary_layer;

  // per-joint bound d0/sqrt(2) keeps the vector norm within d0
  DisturbanceSpec ds;
  ds.d0 = dc.d0 / std::numbers::sqrt2;
  const Disturbance dist(ds, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  const DesiredPoint d0 = m.trajectory.at(0.0);
  Vec2 theta = d0.x_d + Vec2(uniform(rng, -1, 1), uniform(rng, -1, 1)) * dc.theta_spread;
  Vec2 omega = d0.x_d_dot + Vec2(uniform(rng, -1, 1), uniform(rng, -1, 1)) * dc.omega_spread;

  auto accel = [&](const Vec2& q, const Vec2& w, const Vec2& vx, double t) {
    return joint_accel(q, w, vx, dist.at(t), m.limb);
  };
  auto error_at = [&](const Vec2& q, const Vec2& w, double t) {
    const DesiredPoint d = m.trajectory.at(t);
    return ErrorState::from(q, w, d.x_d, d.x_d_dot, d.x_d_ddot);
  };
  auto lyap = [&](const Vec2& q, const Vec2& w, double t) {
    return 0.5 * sliding_surface(error_at(q, w, t), gains.c).squaredNorm();
  };

  const int steps = static_cast<int>(std::llround(dc.duration / dc.step));
  const double h = dc.step;
  const double t_sample = h * dc.sample_every;
  double v_prev = lyap(theta, omega, 0.0);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const ErrorState err = error_at(theta, omega, t);
    const DriftAndInput fg = fx_gx(theta, omega, m.limb);
    const Vec2 vx = smc_law(err, fg.f_x, fg.g_x, gains);

    const Vec2 k1q = omega;
    const Vec2 k1w = accel(theta, omega, vx, t);
    const Vec2 k2q = omega + 0.5 * h * k1w;
    const Vec2 k2w = accel(theta + 0.5 * h * k1q, k2q, vx, t + 0.5 * h);
    const Vec2 k3q = omega + 0.5 * h * k2w;
    const Vec2 k3w = accel(theta + 0.5 * h * k2q, k3q, vx, t + 0.5 * h);
    const Vec2 k4q = omega + h * k3w;
    const Vec2 k4w = accel(theta + h * k3q, k4q, vx, t + h);
    theta += (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    omega += (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);

    if ((k + 1) % dc.sample_every != 0) continue;
    const double v_next = lyap(theta, omega, t + h);
    if (std::sqrt(2.0 * v_prev) > dc.s_floor) {
      const double rate = (v_next - v_prev) / t_sample;
      if (out.checked == 0 || rate > out.worst_rate) out.worst_rate = rate;
      ++out.checked;
      if (!(rate < 0.0)) ++out.violations;
    }
    v_prev = v_next;
  }
  return out;
}

}  // namespace etsmc
