#pragma once

#include "etsmc/types.hpp"

namespace etsmc {

/// 2x4 extended error matrix: columns x_tilde1, x_tilde2, x_d, x_d_dot; rows are joints.
using ErrorMatrix = Eigen::Matrix<double, 2, 4>;

/// How the derivative of the held intermediate control enters stage 1.
enum class VxRate {
  Zero,                ///< derivative of a held constant
  BackwardDifference,  ///< (v_x_held(k) - v_x_held(k-1)) / T_s
};

struct GainSet {
  double c = 30.0;
  double rho = 20.0;
  double kp1 = 3.0;
  double kp2 = 5.0;
  /// Half-width of the saturation replacing sign(s); 0 = pure sign.
  double boundary_layer = 0.5;
  /// Weight on the cross term g_x^T s in the first pseudo-control
  /// (1 = unweighted Lyapunov function).
  double coupling = 1e-7;
  VxRate vx_rate = VxRate::BackwardDifference;

  void validate() const;
};

struct ErrorState {
  Vec2 x_tilde1 = Vec2::Zero();
  Vec2 x_tilde2 = Vec2::Zero();
  Vec2 x_d = Vec2::Zero();
  Vec2 x_d_dot = Vec2::Zero();
  Vec2 x_d_ddot = Vec2::Zero();

  static ErrorState from(const Vec2& theta, const Vec2& omega, const Vec2& x_d,
                         const Vec2& x_d_dot, const Vec2& x_d_ddot);
  ErrorMatrix extended() const;
  /// ||[x_tilde1; x_tilde2]||
  double tracking_norm() const;
};

struct HeldSnapshot {
  ErrorMatrix epsilon_held = ErrorMatrix::Zero();
  Vec2 v_x_held = Vec2::Zero();
  double trigger_time = 0.0;
};

struct BackstepState {
  Vec2 z1 = Vec2::Zero();  // Delta [m]
  Vec2 z2 = Vec2::Zero();  // Delta_dot [m/s]
};

struct LyapunovValues {
  double V_x = 0.0;
  double V_1 = 0.0;
  double V_2 = 0.0;
};

/// sign with sign(0) = 0, or s/phi clipped to [-1, 1] when phi > 0.
Vec2 switching(const Vec2& s, double boundary_layer);

Vec2 sliding_surface(const ErrorState& err, double c);

/// v_x = g_x^-1 [-f_x + x_d_ddot - c x_tilde2 - rho sw(s)].
Vec2 smc_law(const ErrorState& err, const Vec2& f_x, const Mat2& g_x, const GainSet& gains);

/// Evaluates smc_law at a trigger instant and captures epsilon(t_i).
HeldSnapshot held_law(const ErrorState& err, const Vec2& f_x, const Mat2& g_x,
                      const GainSet& gains, double t);

/// v1 = kp1 (v_x_held - z1) + v_x_rate - coupling * g_x^T s.
Vec2 backstep_stage1(const HeldSnapshot& held, const Vec2& v_x_rate, const Vec2& z1,
                     const Vec2& s, const Mat2& g_x, const GainSet& gains);

/// U_v = f2 - kp2 (v1 - z2) - v1_rate - (v_x_held - z1), the expansion of g2 = -1.
Vec2 backstep_stage2(const Vec2& v1, const Vec2& v1_rate, const Vec2& z2, const Vec2& f2,
                     const HeldSnapshot& held, const Vec2& z1, double kp2);

LyapunovValues lyapunov_values(const Vec2& s, const HeldSnapshot& held, const Vec2& z1,
                               const Vec2& v1, const Vec2& z2);

}  // namespace etsmc
