#pragma once

#include <cmath>

#include "pitchap/errors.hpp"

namespace pitchap {

/// Parallel PID gains in loop units (torque per degree, per degree-second,
/// per degree/second). `derivative_filter` is the first-order time constant
/// applied to the derivative path; zero gives a raw backward difference.
struct PidGains {
  double kp = 44.0;
  double ki = 23.4;
  double kd = 24.0;
  double derivative_filter = 0.01;

  void validate() const {
    if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd))
      throw ConfigError("gains must be finite", "loop.pid");
    if (!(derivative_filter >= 0.0) || !std::isfinite(derivative_filter))
      throw ConfigError("must be non-negative", "loop.pid.derivative_filter");
  }

  friend bool operator==(const PidGains&, const PidGains&) = default;
};

/// Discrete parallel PID acting on the error. Integral uses the trapezoidal
/// rule; the derivative is a backward difference through a first-order lag
/// (backward Euler). The controller starts at rest with zero error history,
/// so an error present at the first call produces a derivative kick.
class PidController {
 public:
  explicit PidController(PidGains gains) : gains_(gains) { gains_.validate(); }

  double step(double error, double dt) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (primed_) integral_ += 0.5 * (error + prev_error_) * dt;
    const double tf = gains_.derivative_filter;
    derivative_ = (tf * derivative_ + (error - prev_error_)) / (tf + dt);
    prev_error_ = error;
    primed_ = true;
    return gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative_;
  }

  void reset() {
    integral_ = 0.0;
    derivative_ = 0.0;
    prev_error_ = 0.0;
    primed_ = false;
  }

  const PidGains& gains() const noexcept { return gains_; }
  double integral() const noexcept { return integral_; }
  double derivative() const noexcept { return derivative_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
  double derivative_ = 0.0;
  double prev_error_ = 0.0;
  bool primed_ = false;
};

}  // namespace pitchap
