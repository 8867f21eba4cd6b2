#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "etsmc/errors.hpp"
#include "etsmc/sea_actuator.hpp"

using namespace etsmc;

namespace {

constexpr double pi = std::numbers::pi;

SeaParams referenced(const Vec2& theta0, const LimbParams& p) {
  SeaParams sp;
  sp.reference_lengths = sea_lengths(theta0, p);
  return sp;
}

// Smooth test path through the joint range.
struct Path {
  Vec2 at(double t) const { return {0.1 + 0.4 * std::sin(1.3 * t), 0.45 + 0.35 * std::sin(0.9 * t + 0.2)}; }
  Vec2 rate(double t) const { return {0.52 * std::cos(1.3 * t), 0.315 * std::cos(0.9 * t + 0.2)}; }
  Vec2 accel(double t) const { return {-0.676 * std::sin(1.3 * t), -0.2835 * std::sin(0.9 * t + 0.2)}; }
};

}  // namespace

TEST_CASE("nut dynamics") {
  const SeaParams sp;
  CHECK(nut_accel({0, 0}, {1, 0}, sp) == Vec2(1, 0));
  CHECK(nut_accel({0.01, 0}, {0, 0}, sp)[0] == doctest::Approx(-0.48).epsilon(1e-14));
  const Vec2 rd{0.02, -0.03};
  CHECK(nut_accel(rd, 48.0 * rd, sp).norm() == 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 r1{u(rng), u(rng)}, r2{u(rng), u(rng)}, u1{u(rng), u(rng)}, u2{u(rng), u(rng)};
    const double a = u(rng), b = u(rng);
    const Vec2 lhs = nut_accel(a * r1 + b * r2, a * u1 + b * u2, sp);
    const Vec2 rhs = a * nut_accel(r1, u1, sp) + b * nut_accel(r2, u2, sp);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(nut_accel({NAN, 0}, {0, 0}, sp), InvalidState);
}

TEST_CASE("SEA length") {
  const LimbParams p;
  SUBCASE("both printed forms agree") {
    for (int i = 0; i <= 2000; ++i) {
      const double q = -pi + 2.0 * pi * i / 2000.0;
      REQUIRE(std::abs(sea_length(q, Joint::Hip, p) - sea_length_cosine_form(q, Joint::Hip, p)) < 1e-12);
      REQUIRE(std::abs(sea_length(q, Joint::Knee, p) - sea_length_cosine_form(q, Joint::Knee, p)) < 1e-12);
    }
  }
  SUBCASE("flattened triangle") {
    const double fold = -(pi / 2 - p.sigma1 - p.alpha1);
    CHECK(sea_length(fold, Joint::Hip, p) == doctest::Approx(std::abs(p.dim3 - p.dim4)).epsilon(1e-12));
    CHECK(sea_length(fold + pi, Joint::Hip, p) == doctest::Approx(p.dim3 + p.dim4).epsilon(1e-12));
    const double knee_fold = -(pi - p.sigma2 - p.alpha2);
    CHECK(sea_length(knee_fold, Joint::Knee, p) == doctest::Approx(std::abs(p.dim8 - p.dim9)).epsilon(1e-12));
  }
  SUBCASE("continuity on a dense grid") {
    for (int i = 0; i <= 10000; ++i) {
      const double q1 = -0.6 + 1.2 * i / 10000.0, q2 = 0.9 * i / 10000.0;
      REQUIRE(std::abs(sea_length(q1 + 1e-6, Joint::Hip, p) - sea_length(q1, Joint::Hip, p)) < 1e-4);
      REQUIRE(std::abs(sea_length(q2 + 1e-6, Joint::Knee, p) - sea_length(q2, Joint::Knee, p)) < 1e-4);
    }
  }
  SUBCASE("negative discriminant") {
    LimbParams bad = p;
    bad.dim1 = 1.0;  // breaks the consistency convention enough to go negative
    bad.dim2 = 0.0;
    bad.dim3 = 0.01;
    bool threw = false;
    for (int i = 0; i <= 100 && !threw; ++i) {
      try {
        sea_length(-pi + 2 * pi * i / 100.0, Joint::Hip, bad);
      } catch (const DegenerateGeometry&) {
        threw = true;
      }
    }
    CHECK(threw);
  }
}

TEST_CASE("SEA Jacobian") {
  const LimbParams p;
  SUBCASE("against central differences on random angles") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> q1(-0.6, 0.6), q2(0.0, 0.9);
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec2 th{q1(rng), q2(rng)};
      const Vec2 j = sea_jacobian(th, p);
      const Vec2 fd = (sea_lengths(th + Vec2(h, h), p) - sea_lengths(th - Vec2(h, h), p)) / (2 * h);
      worst = std::max(worst, ((j - fd).cwiseAbs().array() / fd.cwiseAbs().array()).maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("stationary at the flattened triangle") {
    const double fold = -(pi / 2 - p.sigma1 - p.alpha1);
    const double knee_fold = -(pi - p.sigma2 - p.alpha2);
    const Vec2 j = sea_jacobian({fold + pi, knee_fold + pi}, p);
    CHECK(std::abs(j[0]) < 1e-12);
    CHECK(std::abs(j[1]) < 1e-12);
  }
  SUBCASE("sign of a wide difference") {
    for (int i = 0; i <= 500; ++i) {
      const Vec2 th{-2.0 + 4.0 * i / 500.0, -2.0 + 4.0 * i / 500.0};
      const Vec2 j = sea_jacobian(th, p);
      const Vec2 d = sea_lengths(th + Vec2(1e-4, 1e-4), p) - sea_lengths(th - Vec2(1e-4, 1e-4), p);
      for (int k = 0; k < 2; ++k) {
        if (std::abs(j[k]) > 1e-6) REQUIRE((j[k] > 0) == (d[k] > 0));
      }
    }
  }
}

TEST_CASE("end-effector displacement and deformation") {
  const LimbParams p;
  const Vec2 th0{0.05, 0.3};
  const SeaParams sp = referenced(th0, p);

  CHECK(end_effector_disp(th0, p, sp).norm() == 0.0);
  CHECK(deformation(th0, Vec2::Zero(), p, sp).norm() == 0.0);
  const Vec2 rb = end_effector_disp({0.3, 0.6}, p, sp);
  CHECK(deformation({0.3, 0.6}, rb, p, sp).norm() == 0.0);
  CHECK_THROWS_AS(end_effector_disp(th0, p, SeaParams{}), InvalidState);

  SUBCASE("exact zero at the reference for any geometry") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(-0.5, 0.5), len(0.03, 0.3);
    for (int i = 0; i < 200; ++i) {
      LimbParams g = p;
      g.sigma1 = ang(rng), g.alpha1 = ang(rng), g.dim3 = len(rng), g.dim4 = len(rng) * 0.2;
      g.dim1 = g.dim3 * std::cos(g.sigma1), g.dim2 = g.dim3 * std::sin(g.sigma1);
      const Vec2 q{ang(rng), ang(rng) + 0.5};
      REQUIRE(deformation(q, Vec2::Zero(), g, referenced(q, g)).norm() == 0.0);
    }
  }

  SUBCASE("monotone where the Jacobian keeps sign") {
    double prev = end_effector_disp({-0.6, 0.0}, p, sp)[0];
    const bool rising = sea_jacobian({-0.6, 0.0}, p)[0] > 0;
    for (int i = 1; i <= 1000; ++i) {
      const double q = -0.6 + 1.2 * i / 1000.0;
      REQUIRE((sea_jacobian({q, 0.0}, p)[0] > 0) == rising);
      const double cur = end_effector_disp({q, 0.0}, p, sp)[0];
      REQUIRE((cur > prev) == rising);
      prev = cur;
    }
  }

  SUBCASE("integral of J theta_dot along a path") {
    const Path path;
    const int n = 2000;
    const double T = 3.0, h = T / n;
    Vec2 acc = Vec2::Zero();
    for (int i = 0; i <= n; ++i) {
      const double t = i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * sea_jacobian(path.at(t), p).cwiseProduct(path.rate(t));
    }
    acc *= h / 3.0;
    const SeaParams sp0 = referenced(path.at(0.0), p);
    CHECK((end_effector_disp(path.at(T), p, sp0) - acc).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("end-effector acceleration") {
  const LimbParams p;
  const SeaParams sp = referenced({0.0, 0.3}, p);
  CHECK(end_effector_accel({0.2, 0.5}, Vec2::Zero(), Vec2::Zero(), p, sp).norm() == 0.0);

  SUBCASE("chain-rule reduction near a stationary lever") {
    const Vec2 th{0.2, 0.5}, acc{1.5, -2.0};
    CHECK((end_effector_accel(th, Vec2(1e-6, 1e-6), acc, p, sp) - sea_jacobian(th, p).cwiseProduct(acc)).norm() <
          1e-12);
  }

  SUBCASE("deformation acceleration against path differences") {
    // r(t) is an arbitrary smooth nut path; U_v is whatever the nut model needs
    // to follow it, so Delta_ddot = r_B_ddot + c r_dot - U_v must equal the
    // second difference of Delta along the path.
    const Path path;
    auto r = [](double t) { return Vec2(0.002 * std::sin(2.0 * t), -0.001 * std::cos(1.5 * t)); };
    auto rd = [](double t) { return Vec2(0.004 * std::cos(2.0 * t), 0.0015 * std::sin(1.5 * t)); };
    auto rdd = [](double t) { return Vec2(-0.008 * std::sin(2.0 * t), 0.00225 * std::cos(1.5 * t)); };
    const double h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double t = 0.1 + 0.06 * i;
      const Vec2 u_v = rdd(t) + sp.motor_gain_damping * rd(t);
      const Vec2 model = end_effector_accel(path.at(t), path.rate(t), path.accel(t), p, sp) +
                         sp.motor_gain_damping * rd(t) - u_v;
      const Vec2 fd = (deformation(path.at(t + h), r(t + h), p, sp) - 2.0 * deformation(path.at(t), r(t), p, sp) +
                       deformation(path.at(t - h), r(t - h), p, sp)) /
                      (h * h);
      worst = std::max(worst, (model - fd).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("deformation rate") {
    const Path path;
    auto r = [](double t) { return Vec2(0.002 * t * t, -0.001 * t); };
    const double t = 0.7, h = 1e-6;
    const Vec2 fd = (deformation(path.at(t + h), r(t + h), p, sp) - deformation(path.at(t - h), r(t - h), p, sp)) /
                    (2 * h);
    const Vec2 an = deformation_rate(path.at(t), path.rate(t), Vec2(0.004 * t, -0.001), p);
    CHECK((an - fd).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("SEA parameter validation") {
  SeaParams sp;
  CHECK_NOTHROW(sp.validate());
  sp.motor_gain_damping = 0.0;
  CHECK_THROWS_AS(sp.validate(), ConfigError);
}
