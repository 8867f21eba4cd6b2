#include "etsmc/trajectory.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "etsmc/errors.hpp"

namespace etsmc {

void GaitSpec::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ConfigError("trajectory.period", "must be finite and > 0");
  }
  if (!(hip_amplitude >= 0.0) || !std::isfinite(hip_amplitude)) {
    throw ConfigError("trajectory.hip_amplitude", "must be finite and >= 0");
  }
  if (!(knee_amplitude >= 0.0) || !std::isfinite(knee_amplitude)) {
    throw ConfigError("trajectory.knee_amplitude", "must be finite and >= 0");
  }
  for (double v : {hip_offset, knee_offset, phase_shift}) {
    if (!std::isfinite(v)) throw ConfigError("trajectory", "offsets and phase must be finite");
  }
}

DesiredPoint desired(double t, const GaitSpec& spec) {
  const double w = 2.0 * std::numbers::pi / spec.period;
  const double a1 = w * t;
  const double a2 = w * t + spec.phase_shift;
  DesiredPoint d;
  d.x_d = {spec.hip_offset + spec.hip_amplitude * std::sin(a1),
           spec.knee_offset + spec.knee_amplitude * std::sin(a2)};
  d.x_d_dot = {spec.hip_amplitude * w * std::cos(a1), spec.knee_amplitude * w * std::cos(a2)};
  d.x_d_ddot = {-spec.hip_amplitude * w * w * std::sin(a1),
                -spec.knee_amplitude * w * w * std::sin(a2)};
  return d;
}

bool assumption1_check(const GaitSpec& spec, int n_samples) {
  if (n_samples < 2) throw InvalidState("assumption1_check needs at least 2 samples");
  const double w = 2.0 * std::numbers::pi / spec.period;
  const Vec2 offset{spec.hip_offset, spec.knee_offset};
  const double scale = 1.0 + w * w * (spec.hip_amplitude + spec.knee_amplitude);
  for (int i = 0; i < n_samples; ++i) {
    const double t = spec.period * i / (n_samples - 1);
    const DesiredPoint d = desired(t, spec);
    const Vec2 residual = d.x_d_ddot + w * w * (d.x_d - offset);
    if (residual.cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  }
  return true;
}

struct TabulatedTrajectory::Splines {
  gsl_spline* s1 = nullptr;
  gsl_spline* s2 = nullptr;
  ~Splines() {
    if (s1) gsl_spline_free(s1);
    if (s2) gsl_spline_free(s2);
  }
};

TabulatedTrajectory::TabulatedTrajectory(std::vector<double> t, std::vector<double> q1,
                                         std::vector<double> q2)
    : t_(std::move(t)) {
  if (t_.size() < 3 || q1.size() != t_.size() || q2.size() != t_.size()) {
    throw ConfigError("trajectory.file", "need at least 3 rows of t, theta_d1, theta_d2");
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw ConfigError("trajectory.file", "time column must increase");
  }
  gsl_set_error_handler_off();
  auto sp = std::make_shared<Splines>();
  sp->s1 = gsl_spline_alloc(gsl_interp_cspline, t_.size());
  sp->s2 = gsl_spline_alloc(gsl_interp_cspline, t_.size());
  if (gsl_spline_init(sp->s1, t_.data(), q1.data(), t_.size()) != 0 ||
      gsl_spline_init(sp->s2, t_.data(), q2.data(), t_.size()) != 0) {
    throw ConfigError("trajectory.file", "spline construction failed");
  }
  splines_ = std::move(sp);
}

TabulatedTrajectory TabulatedTrajectory::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trajectory.file", "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory.file", "empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t_s,theta_d1_rad,theta_d2_rad") {
    throw ConfigError("trajectory.file", "expected header t_s,theta_d1_rad,theta_d2_rad");
  }
  std::vector<double> cols[3];
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (k > 2 || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ConfigError("trajectory.file", "bad value on line " + std::to_string(row));
      }
      cols[k++].push_back(v);
    }
    if (k != 3) throw ConfigError("trajectory.file", "expected 3 columns on line " + std::to_string(row));
  }
  return TabulatedTrajectory(std::move(cols[0]), std::move(cols[1]), std::move(cols[2]));
}

DesiredPoint TabulatedTrajectory::at(double t) const {
  DesiredPoint d;
  const bool outside = t < t_.front() || t > t_.back();
  const double tc = t < t_.front() ? t_.front() : (t > t_.back() ? t_.back() : t);
  d.x_d = {gsl_spline_eval(splines_->s1, tc, nullptr), gsl_spline_eval(splines_->s2, tc, nullptr)};
  if (!outside) {
    d.x_d_dot = {gsl_spline_eval_deriv(splines_->s1, tc, nullptr),
                 gsl_spline_eval_deriv(splines_->s2, tc, nullptr)};
    d.x_d_ddot = {gsl_spline_eval_deriv2(splines_->s1, tc, nullptr),
                  gsl_spline_eval_deriv2(splines_->s2, tc, nullptr)};
  }
  return d;
}

DesiredPoint Trajectory::at(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidState("trajectory time must be >= 0");
  return table_ ? table_->at(t) : desired(t, spec_);
}

std::optional<bool> Trajectory::assumption1(int n_samples) const {
  if (table_) return std::nullopt;
  return assumption1_check(spec_, n_samples);
}

double Trajectory::reference_bound(double horizon, int n) const {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const DesiredPoint d = at(horizon * i / (n - 1));
    best = std::max(best, std::sqrt(d.x_d.squaredNorm() + d.x_d_dot.squaredNorm()));
  }
  return best;
}

}  // namespace etsmc
