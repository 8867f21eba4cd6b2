#include "etsmc/control_laws.hpp"

#include <algorithm>
#include <cmath>

#include "etsmc/errors.hpp"

namespace etsmc {
namespace {

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be finite and > 0");
}

}  // namespace

void GainSet::validate() const {
  require_positive(c, "gains.c");
  require_positive(rho, "gains.rho");
  require_positive(kp1, "gains.kp1");
  require_positive(kp2, "gains.kp2");
  if (!(boundary_layer >= 0.0) || !std::isfinite(boundary_layer)) {
    throw ConfigError("gains.boundary_layer", "must be finite and >= 0");
  }
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw ConfigError("gains.coupling", "must be finite and >= 0");
  }
}

ErrorState ErrorState::from(const Vec2& theta, const Vec2& omega, const Vec2& x_d,
                            const Vec2& x_d_dot, const Vec2& x_d_ddot) {
  ErrorState e;
  e.x_tilde1 = theta - x_d;
  e.x_tilde2 = omega - x_d_dot;
  e.x_d = x_d;
  e.x_d_dot = x_d_dot;
  e.x_d_ddot = x_d_ddot;
  return e;
}

ErrorMatrix ErrorState::extended() const {
  ErrorMatrix m;
  m.col(0) = x_tilde1;
  m.col(1) = x_tilde2;
  m.col(2) = x_d;
  m.col(3) = x_d_dot;
  return m;
}

double ErrorState::tracking_norm() const {
  return std::sqrt(x_tilde1.squaredNorm() + x_tilde2.squaredNorm());
}

Vec2 switching(const Vec2& s, double boundary_layer) {
  Vec2 out;
  for (int i = 0; i < 2; ++i) {
    if (boundary_layer > 0.0) {
      out[i] = std::clamp(s[i] / boundary_layer, -1.0, 1.0);
    } else {
      out[i] = s[i] > 0.0 ? 1.0 : (s[i] < 0.0 ? -1.0 : 0.0);
    }
  }
  return out;
}

Vec2 sliding_surface(const ErrorState& err, double c) {
  return c * err.x_tilde1 + err.x_tilde2;
}

Vec2 smc_law(const ErrorState& err, const Vec2& f_x, const Mat2& g_x, const GainSet& gains) {
  if (!f_x.allFinite() || !g_x.allFinite()) throw InvalidState("non-finite f_x or g_x");
  const double scale = g_x.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(g_x.determinant()) <= 1e-12 * scale * scale) {
    throw NearSingularActuation("g_x is singular");
  }
  const Vec2 s = sliding_surface(err, gains.c);
  const Vec2 rhs = -f_x + err.x_d_ddot - gains.c * err.x_tilde2 -
                   gains.rho * switching(s, gains.boundary_layer);
  return g_x.partialPivLu().solve(rhs);
}

HeldSnapshot held_law(const ErrorState& err, const Vec2& f_x, const Mat2& g_x,
                      const GainSet& gains, double t) {
  HeldSnapshot h;
  h.v_x_held = smc_law(err, f_x, g_x, gains);
  h.epsilon_held = err.extended();
  h.trigger_time = t;
  return h;
}

Vec2 backstep_stage1(const HeldSnapshot& held, const Vec2& v_x_rate, const Vec2& z1,
                     const Vec2& s, const Mat2& g_x, const GainSet& gains) {
  return gains.kp1 * (held.v_x_held - z1) + v_x_rate - gains.coupling * (g_x.transpose() * s);
}

Vec2 backstep_stage2(const Vec2& v1, const Vec2& v1_rate, const Vec2& z2, const Vec2& f2,
                     const HeldSnapshot& held, const Vec2& z1, double kp2) {
  return f2 - kp2 * (v1 - z2) - v1_rate - (held.v_x_held - z1);
}

LyapunovValues lyapunov_values(const Vec2& s, const HeldSnapshot& held, const Vec2& z1,
                               const Vec2& v1, const Vec2& z2) {
  LyapunovValues v;
  v.V_x = 0.5 * s.squaredNorm();
  v.V_1 = v.V_x + 0.5 * (held.v_x_held - z1).squaredNorm();
  v.V_2 = v.V_1 + 0.5 * (v1 - z2).squaredNorm();
  return v;
}

}  // namespace etsmc
