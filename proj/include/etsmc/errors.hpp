#pragma once

#include <stdexcept>
#include <string>

namespace etsmc {

/// Non-finite or otherwise unusable state handed to a model function.
class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// SEA mounting triangle collapsed (L_S or sin(gamma) at or below tolerance).
class DegenerateGeometry : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Limb mass matrix is not invertible.
class SingularInertia : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input matrix g_x is (close to) singular, e.g. a moment arm near zero.
class NearSingularActuation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrated state left the finite / guarded region.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double t)
      : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Configuration parse or validation failure; `key()` names the offender.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace etsmc
