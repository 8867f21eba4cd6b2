#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etsmc/types.hpp"

namespace etsmc {

struct GaitSpec {
  double period = 10.0;
  double hip_amplitude = 0.15;
  double hip_offset = 0.0;
  double knee_amplitude = 0.12;
  double knee_offset = 0.30;
  double phase_shift = 1.5707963267948966;

  void validate() const;
};

struct DesiredPoint {
  Vec2 x_d = Vec2::Zero();
  Vec2 x_d_dot = Vec2::Zero();
  Vec2 x_d_ddot = Vec2::Zero();
};

/// Sinusoidal swing-phase reference with analytic derivatives.
DesiredPoint desired(double t, const GaitSpec& spec);

/// True when x_d_ddot = -omega^2 (x_d - offset) holds at n_samples points of one
/// period, i.e. the reference is the output of a harmonic oscillator.
bool assumption1_check(const GaitSpec& spec, int n_samples);

/// Cubic-spline reference loaded from a CSV with columns t_s, theta_d1_rad,
/// theta_d2_rad. Outside the table the end values are held with zero rates.
class TabulatedTrajectory {
 public:
  TabulatedTrajectory(std::vector<double> t, std::vector<double> q1, std::vector<double> q2);
  static TabulatedTrajectory load_csv(const std::string& path);

  DesiredPoint at(double t) const;
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }

 private:
  struct Splines;
  std::vector<double> t_;
  std::shared_ptr<const Splines> splines_;
};

/// Either a GaitSpec sinusoid or a tabulated reference.
class Trajectory {
 public:
  explicit Trajectory(GaitSpec spec = {}) : spec_(spec) {}
  explicit Trajectory(TabulatedTrajectory table) : table_(std::move(table)) {}

  DesiredPoint at(double t) const;
  bool tabulated() const { return table_.has_value(); }
  const GaitSpec& gait() const { return spec_; }
  /// nullopt when the check cannot be applied (tabulated data).
  std::optional<bool> assumption1(int n_samples = 1000) const;
  /// max ||[x_d; x_d_dot]|| on a grid of n points over [0, horizon].
  double reference_bound(double horizon, int n = 2001) const;

 private:
  GaitSpec spec_;
  std::optional<TabulatedTrajectory> table_;
};

}  // namespace etsmc
