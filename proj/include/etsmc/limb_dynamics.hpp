#pragma once

#include <cmath>

#include "etsmc/types.hpp"

namespace etsmc {

/// Physical and mounting parameters of the two-link SEA-driven limb.
///
/// Link/mass values default to the reference lower-limb model. The SEA mount
/// geometry (dim1..dim9, alpha, sigma) is a surrogate chosen so both
/// actuators keep a positive moment arm (sin(gamma) in [0.2, 1]) over the
/// default joint range. dim1/dim2 and dim6/dim7 default to the values that
/// make the cosine-rule and expanded forms of the SEA length identical:
/// dim1 = dim3 cos(sigma1), dim2 = dim3 sin(sigma1) (and likewise for dim6,
/// dim7 with dim8, sigma2).
struct LimbParams {
  double m1 = 1.07;    // [kg]
  double m2 = 0.89;    // [kg]
  double I1 = 0.028;   // [kg m^2]
  double I2 = 0.002;   // [kg m^2]
  double L1 = 0.30;    // link-1 length [m]
  double L2 = 0.30;    // link-2 length [m], geometry only
  double R1 = 0.15;    // COM distance, link 1 [m]
  double R2 = 0.15;    // COM distance, link 2 [m]
  double B1 = 0.3;     // viscous coefficient [N m s/rad]
  double B2 = 0.3;
  double k1 = 20000.0;  // spring stiffness [N/m]
  double k2 = 20000.0;
  double g = 9.81;

  double sigma1 = 0.10;    // [rad]
  double alpha1 = -0.10;
  double sigma2 = 0.30;
  double alpha2 = 1.7207963267948966;  // sigma2 + alpha2 = pi/2 + 0.45

  double dim3 = 0.25;   // O1A1 [m]
  double dim4 = 0.05;   // O1B1, SEA-1 output lever [m]
  double dim1 = dim3 * std::cos(sigma1);
  double dim2 = dim3 * std::sin(sigma1);
  double dim5 = 0.30;   // mount spacing along link 1 [m], not used by the planar model
  double dim8 = 0.25;   // O2A2 [m]
  double dim9 = 0.05;   // O2B2, SEA-2 output lever [m]
  double dim6 = dim8 * std::cos(sigma2);
  double dim7 = dim8 * std::sin(sigma2);

  Vec2 joint_min{-0.6, 0.0};  // [rad]
  Vec2 joint_max{0.6, 0.9};

  /// Throws ConfigError (key "limb.<field>") on an invariant violation.
  void validate() const;
};

/// Mass matrix M of the second-order form, with negated off-diagonals.
struct MassMatrix {
  double M11 = 0.0;
  double M12 = 0.0;  // printed term; enters M as -M12
  double M21 = 0.0;
  double M22 = 0.0;

  Mat2 matrix() const {
    Mat2 m;
    m << M11, -M12, -M21, M22;
    return m;
  }
  double determinant() const { return M11 * M22 - M12 * M21; }
};

struct MomentAngle {
  double gamma = 0.0;      // [rad]
  double sin_gamma = 0.0;
};

struct DriftAndInput {
  Vec2 f_x;  // M^-1 N
  Mat2 g_x;  // M^-1 diag(-k1 dim4 sin g1, -k2 dim9 sin g2)
};

inline constexpr double kGeometryTolerance = 1e-9;
inline constexpr double kActuationTolerance = 1e-6;

MassMatrix mass_matrix(const Vec2& theta, const LimbParams& p);

/// Gravity, centrifugal/Coriolis and viscous terms (N1, N2).
Vec2 bias_vector(const Vec2& theta, const Vec2& omega, const LimbParams& p);

/// Interior angle at the SEA output point between the actuator line and the
/// output lever, via the sine rule in the mounting triangle.
MomentAngle moment_angle(double theta_i, Joint joint, const LimbParams& p);

/// SEA torques tau_S = -k Delta dim sin(gamma).
Vec2 spring_torque(const Vec2& delta, const Vec2& theta, const LimbParams& p);

/// Actuator gain diag(-k1 dim4 sin g1, -k2 dim9 sin g2) [N m / m].
Vec2 actuator_gain(const Vec2& theta, const LimbParams& p);

DriftAndInput fx_gx(const Vec2& theta, const Vec2& omega, const LimbParams& p);

/// theta_ddot = M^-1 (tau_S + N + d) with d the joint disturbance torque.
Vec2 joint_accel(const Vec2& theta, const Vec2& omega, const Vec2& delta,
                 const Vec2& disturbance, const LimbParams& p);

/// Joint disturbance torque expressed in deformation units, i.e. the d with
/// g_x d = M^-1 d_joint. Guards against sin(gamma) -> 0.
Vec2 mapped_disturbance(const Vec2& theta, const Vec2& disturbance,
                        const LimbParams& p);

}  // namespace etsmc
