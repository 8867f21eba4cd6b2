#include "etsmc/limb_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "etsmc/errors.hpp"
#include "etsmc/sea_actuator.hpp"

namespace etsmc {
namespace {

void require_finite(const Vec2& v, const char* what) {
  if (!v.allFinite()) throw InvalidState(std::string("non-finite ") + what);
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("limb.") + key, "must be finite and > 0");
  }
}

}  // namespace

void LimbParams::validate() const {
  require_positive(m1, "m1");
  require_positive(m2, "m2");
  require_positive(I1, "I1");
  require_positive(I2, "I2");
  require_positive(L1, "L1");
  require_positive(L2, "L2");
  require_positive(R1, "R1");
  require_positive(R2, "R2");
  require_positive(k1, "k1");
  require_positive(k2, "k2");
  require_positive(g, "g");
  require_positive(dim3, "dim3");
  require_positive(dim4, "dim4");
  require_positive(dim8, "dim8");
  require_positive(dim9, "dim9");
  if (!(B1 >= 0.0) || !std::isfinite(B1)) throw ConfigError("limb.B1", "must be >= 0");
  if (!(B2 >= 0.0) || !std::isfinite(B2)) throw ConfigError("limb.B2", "must be >= 0");
  for (double v : {sigma1, alpha1, sigma2, alpha2, dim1, dim2, dim5, dim6, dim7}) {
    if (!std::isfinite(v)) throw ConfigError("limb", "non-finite mounting geometry");
  }
  for (int j = 0; j < 2; ++j) {
    if (!(joint_min[j] < joint_max[j])) {
      throw ConfigError(j == 0 ? "limb.joint1_min" : "limb.joint2_min",
                        "joint range must satisfy min < max");
    }
  }

  // L_S must stay positive over the whole configured range.
  constexpr int kScan = 256;
  for (int j = 0; j < 2; ++j) {
    const Joint joint = j == 0 ? Joint::Hip : Joint::Knee;
    for (int i = 0; i <= kScan; ++i) {
      const double th = joint_min[j] + (joint_max[j] - joint_min[j]) * i / kScan;
      double len = 0.0;
      try {
        len = sea_length(th, joint, *this);
      } catch (const DegenerateGeometry&) {
        len = 0.0;
      }
      if (!(len > kGeometryTolerance)) {
        throw ConfigError(j == 0 ? "limb.dim3" : "limb.dim8",
                          "SEA length collapses inside the joint range");
      }
    }
  }
}

MassMatrix mass_matrix(const Vec2& theta, const LimbParams& p) {
  require_finite(theta, "joint angle");
  const double c2 = std::cos(theta[1]);
  MassMatrix m;
  m.M11 = p.m1 * p.R1 * p.R1 + p.I1 + p.m2 * p.L1 * p.L1 + p.m2 * p.R2 * p.R2 +
          2.0 * p.m2 * p.L1 * p.R2 * c2;
  m.M12 = p.m2 * p.R2 * p.R2 + p.m2 * p.L1 * p.R2 * c2;
  m.M21 = p.m2 * p.R2 * p.R2 + p.m2 * p.L1 * p.R2 * c2;
  m.M22 = p.m2 * p.R2 * p.R2 + p.I2;
  return m;
}

Vec2 bias_vector(const Vec2& theta, const Vec2& omega, const LimbParams& p) {
  require_finite(theta, "joint angle");
  require_finite(omega, "joint velocity");
  const double s1 = std::sin(theta[0]);
  const double s2 = std::sin(theta[1]);
  const double s21 = std::sin(theta[1] - theta[0]);
  const double w1 = omega[0];
  const double w2 = omega[1];
  const double coupling = p.m2 * p.L1 * p.R2;

  const double n1 = -p.m1 * p.g * p.R1 * s1 - p.m2 * p.g * p.L1 * s1 +
                    p.m2 * p.g * p.R2 * s21 - coupling * s2 * (w2 * w2 - 2.0 * w1 * w2) -
                    p.B1 * w1;
  const double n2 = -p.m2 * p.g * p.R2 * s21 - coupling * w1 * w1 * s2 - p.B2 * w2;
  return {n1, n2};
}

MomentAngle moment_angle(double theta_i, Joint joint, const LimbParams& p) {
  if (!std::isfinite(theta_i)) throw InvalidState("non-finite joint angle");
  const double len = sea_length(theta_i, joint, p);
  if (len <= kGeometryTolerance) throw DegenerateGeometry("SEA length at tolerance");

  const bool hip = joint == Joint::Hip;
  const double base = hip ? p.dim3 : p.dim8;
  const double lever = hip ? p.dim4 : p.dim9;
  const double interior = mounting_angle(theta_i, joint, p);

  MomentAngle out;
  out.sin_gamma = base * std::sin(interior) / len;
  // cosine rule at the output point for the quadrant
  const double cos_gamma = (lever * lever + len * len - base * base) / (2.0 * lever * len);
  out.gamma = std::atan2(out.sin_gamma, cos_gamma);
  return out;
}

Vec2 actuator_gain(const Vec2& theta, const LimbParams& p) {
  const double sg1 = moment_angle(theta[0], Joint::Hip, p).sin_gamma;
  const double sg2 = moment_angle(theta[1], Joint::Knee, p).sin_gamma;
  return {-p.k1 * p.dim4 * sg1, -p.k2 * p.dim9 * sg2};
}

Vec2 spring_torque(const Vec2& delta, const Vec2& theta, const LimbParams& p) {
  require_finite(delta, "deformation");
  require_finite(theta, "joint angle");
  return actuator_gain(theta, p).cwiseProduct(delta);
}

DriftAndInput fx_gx(const Vec2& theta, const Vec2& omega, const LimbParams& p) {
  const MassMatrix mm = mass_matrix(theta, p);
  const double det = mm.determinant();
  if (!(std::abs(det) > 1e-12)) throw SingularInertia("mass matrix determinant ~ 0");

  const Vec2 gain = actuator_gain(theta, p);
  const double sg1 = gain[0] / (-p.k1 * p.dim4);
  const double sg2 = gain[1] / (-p.k2 * p.dim9);
  if (std::abs(sg1) < kActuationTolerance || std::abs(sg2) < kActuationTolerance) {
    throw NearSingularActuation("SEA moment arm sin(gamma) below tolerance");
  }

  const Mat2 minv = mm.matrix().inverse();
  DriftAndInput out;
  out.f_x = minv * bias_vector(theta, omega, p);
  out.g_x = minv * gain.asDiagonal();
  return out;
}

Vec2 joint_accel(const Vec2& theta, const Vec2& omega, const Vec2& delta,
                 const Vec2& disturbance, const LimbParams& p) {
  require_finite(disturbance, "disturbance");
  const MassMatrix mm = mass_matrix(theta, p);
  if (!(std::abs(mm.determinant()) > 1e-12)) {
    throw SingularInertia("mass matrix determinant ~ 0");
  }
  const Vec2 rhs = spring_torque(delta, theta, p) + bias_vector(theta, omega, p) + disturbance;
  return mm.matrix().partialPivLu().solve(rhs);
}

Vec2 mapped_disturbance(const Vec2& theta, const Vec2& disturbance,
                        const LimbParams& p) {
  const Vec2 gain = actuator_gain(theta, p);
  const double floor1 = p.k1 * p.dim4 * kActuationTolerance;
  const double floor2 = p.k2 * p.dim9 * kActuationTolerance;
  if (std::abs(gain[0]) < floor1 || std::abs(gain[1]) < floor2) {
    throw NearSingularActuation("cannot map disturbance through a vanishing moment arm");
  }
  return disturbance.cwiseQuotient(gain);
}

}  // namespace etsmc
