#pragma once

#include <optional>

#include "etsmc/limb_dynamics.hpp"
#include "etsmc/types.hpp"

namespace etsmc {

/// Ball-screw nut state of both SEAs.
struct SeaState {
  Vec2 nut_position = Vec2::Zero();  // r [m]
  Vec2 nut_velocity = Vec2::Zero();  // r_dot [m/s]
};

struct SeaParams {
  /// Coefficient of r_dot in r_ddot = U_v - c r_dot (motor identification).
  double motor_gain_damping = 48.0;
  /// L_S at the reference configuration; defines r_B = 0. Filled from the
  /// initial joint angles when not configured.
  std::optional<Vec2> reference_lengths;
  /// Guard on |r_dot| [m/s].
  double slew_limit = 10.0;

  void validate() const;
};

/// Interior angle of the mounting triangle at the joint (the argument of the
/// cosine in the cosine-rule form of L_S).
double mounting_angle(double theta_i, Joint joint, const LimbParams& p);

/// SEA length from the expanded (dim1/dim2, dim6/dim7) form.
double sea_length(double theta_i, Joint joint, const LimbParams& p);

/// SEA length from the plain cosine-rule form. Agrees with sea_length when the
/// dim1/dim2 (dim6/dim7) consistency convention holds.
double sea_length_cosine_form(double theta_i, Joint joint, const LimbParams& p);

/// dL_S/dtheta for both joints [m/rad].
Vec2 sea_jacobian(const Vec2& theta, const LimbParams& p);

Vec2 sea_lengths(const Vec2& theta, const LimbParams& p);

/// r_ddot = U_v - c r_dot.
Vec2 nut_accel(const Vec2& nut_velocity, const Vec2& u_v, const SeaParams& sp);

/// r_B = L_S(theta) - reference_lengths.
Vec2 end_effector_disp(const Vec2& theta, const LimbParams& p, const SeaParams& sp);

/// Delta = r_B - r.
Vec2 deformation(const Vec2& theta, const Vec2& nut_position, const LimbParams& p,
                 const SeaParams& sp);

/// Delta_dot = J theta_dot - r_dot.
Vec2 deformation_rate(const Vec2& theta, const Vec2& omega, const Vec2& nut_velocity,
                      const LimbParams& p);

/// r_B_ddot = J theta_ddot + J_dot theta_dot, J_dot by central difference of the
/// Jacobian (step 1e-6 rad).
Vec2 end_effector_accel(const Vec2& theta, const Vec2& omega, const Vec2& theta_ddot,
                        const LimbParams& p, const SeaParams& sp);

}  // namespace etsmc
