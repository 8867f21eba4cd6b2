#include "etsmc/sea_actuator.hpp"

#include <cmath>
#include <numbers>

#include "etsmc/errors.hpp"

namespace etsmc {

void SeaParams::validate() const {
  if (!(motor_gain_damping > 0.0) || !std::isfinite(motor_gain_damping)) {
    throw ConfigError("sea.motor_gain_damping", "must be finite and > 0");
  }
  if (!(slew_limit > 0.0)) throw ConfigError("sea.slew_limit", "must be > 0");
  if (reference_lengths && (!reference_lengths->allFinite() ||
                            (reference_lengths->array() <= 0.0).any())) {
    throw ConfigError("sea.reference_lengths", "must be finite and > 0");
  }
}

double mounting_angle(double theta_i, Joint joint, const LimbParams& p) {
  if (joint == Joint::Hip) {
    return std::numbers::pi / 2.0 - p.sigma1 + theta_i - p.alpha1;
  }
  return std::numbers::pi - p.sigma2 + theta_i - p.alpha2;
}

double sea_length(double theta_i, Joint joint, const LimbParams& p) {
  if (!std::isfinite(theta_i)) throw InvalidState("non-finite joint angle");
  double disc = 0.0;
  if (joint == Joint::Hip) {
    const double phi = theta_i - p.alpha1;
    disc = p.dim4 * p.dim4 + p.dim3 * p.dim3 -
           2.0 * p.dim4 * (p.dim2 * std::cos(phi) - p.dim1 * std::sin(phi));
  } else {
    const double psi = p.alpha2 - theta_i;
    disc = p.dim9 * p.dim9 + p.dim8 * p.dim8 -
           2.0 * p.dim9 * (p.dim7 * std::sin(psi) - p.dim6 * std::cos(psi));
  }
  if (disc < 0.0) throw DegenerateGeometry("negative SEA length discriminant");
  return std::sqrt(disc);
}

double sea_length_cosine_form(double theta_i, Joint joint, const LimbParams& p) {
  const double a = joint == Joint::Hip ? p.dim3 : p.dim8;
  const double b = joint == Joint::Hip ? p.dim4 : p.dim9;
  const double disc = a * a + b * b - 2.0 * a * b * std::cos(mounting_angle(theta_i, joint, p));
  if (disc < 0.0) throw DegenerateGeometry("negative SEA length discriminant");
  return std::sqrt(disc);
}

Vec2 sea_lengths(const Vec2& theta, const LimbParams& p) {
  return {sea_length(theta[0], Joint::Hip, p), sea_length(theta[1], Joint::Knee, p)};
}

Vec2 sea_jacobian(const Vec2& theta, const LimbParams& p) {
  const Vec2 len = sea_lengths(theta, p);
  if (len[0] <= kGeometryTolerance || len[1] <= kGeometryTolerance) {
    throw DegenerateGeometry("SEA length at tolerance");
  }
  const double phi = theta[0] - p.alpha1;
  const double psi = p.alpha2 - theta[1];
  const double d1 = p.dim4 * (p.dim2 * std::sin(phi) + p.dim1 * std::cos(phi)) / len[0];
  const double d2 = p.dim9 * (p.dim7 * std::cos(psi) + p.dim6 * std::sin(psi)) / len[1];
  return {d1, d2};
}

Vec2 nut_accel(const Vec2& nut_velocity, const Vec2& u_v, const SeaParams& sp) {
  if (!nut_velocity.allFinite() || !u_v.allFinite()) {
    throw InvalidState("non-finite nut velocity or input voltage");
  }
  return u_v - sp.motor_gain_damping * nut_velocity;
}

Vec2 end_effector_disp(const Vec2& theta, const LimbParams& p, const SeaParams& sp) {
  if (!sp.reference_lengths) throw InvalidState("SEA reference lengths not set");
  return sea_lengths(theta, p) - *sp.reference_lengths;
}

Vec2 deformation(const Vec2& theta, const Vec2& nut_position, const LimbParams& p,
                 const SeaParams& sp) {
  return end_effector_disp(theta, p, sp) - nut_position;
}

Vec2 deformation_rate(const Vec2& theta, const Vec2& omega, const Vec2& nut_velocity,
                      const LimbParams& p) {
  return sea_jacobian(theta, p).cwiseProduct(omega) - nut_velocity;
}

Vec2 end_effector_accel(const Vec2& theta, const Vec2& omega, const Vec2& theta_ddot,
                        const LimbParams& p, const SeaParams& /*sp*/) {
  constexpr double kStep = 1e-6;
  const Vec2 jac = sea_jacobian(theta, p);
  const Vec2 step = Vec2::Constant(kStep);
  const Vec2 djac = (sea_jacobian(theta + step, p) - sea_jacobian(theta - step, p)) / (2.0 * kStep);
  const Vec2 jac_dot = djac.cwiseProduct(omega);
  return jac.cwiseProduct(theta_ddot) + jac_dot.cwiseProduct(omega);
}

}  // namespace etsmc
