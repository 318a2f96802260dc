#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pitchap/discretize.hpp"
#include "pitchap/errors.hpp"

namespace pitchap {

/// n * wn^2 / (s^2 + 2*mu*wn*s + wn^2) * exp(-tau*s)
struct ActuatorParams {
  double gain = 7.0;                // n
  double natural_frequency = 50.0;  // wn, rad/s
  double damping = 0.5;             // mu
  double delay = 0.1;               // tau, s

  void validate() const {
    if (gain == 0.0 || !std::isfinite(gain)) throw ConfigError("must be non-zero", "loop.actuator.gain");
    if (!(natural_frequency > 0.0))
      throw ConfigError("must be positive", "loop.actuator.natural_frequency");
    if (!(damping > 0.0)) throw ConfigError("must be positive", "loop.actuator.damping");
    if (!(delay >= 0.0) || !std::isfinite(delay))
      throw ConfigError("must be non-negative", "loop.actuator.delay");
  }
};

/// Number of whole steps in `span`, or throws if `span` is not an integer
/// multiple of `dt`.
inline std::size_t whole_steps(double span, double dt, const char* key) {
  const double ratio = span / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio))
    throw ConfigError("must be an integer multiple of the step size", key);
  return static_cast<std::size_t>(rounded);
}

/// Second-order actuator followed by a pure transport delay.
///
/// The second-order section is discretised exactly under zero-order hold.
/// `step(u)` returns the deflection to apply over the coming interval: the
/// section's output sampled `delay` seconds ago. The delay line holds
/// delay/dt samples and is preloaded with the initial deflection, so the
/// output is frozen at that value for exactly one delay after start.
class ActuatorModel {
 public:
  ActuatorModel(ActuatorParams params, double dt, double initial_deflection = 0.0)
      : params_(params) {
    params_.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const double wn = params_.natural_frequency;
    Eigen::Matrix2d a;
    a << 0.0, 1.0, -wn * wn, -2.0 * params_.damping * wn;
    const Eigen::Vector2d b(0.0, params_.gain * wn * wn);
    const auto zoh = zoh_discretize<2>(a, b, dt);
    ad_ = zoh.Ad;
    bd_ = zoh.Bd;
    state_ << initial_deflection, 0.0;
    line_.assign(whole_steps(params_.delay, dt, "loop.actuator.delay"), initial_deflection);
  }

  double step(double command) {
    const double undelayed = state_(0);
    last_undelayed_ = undelayed;
    state_ = ad_ * state_ + bd_ * command;
    if (line_.empty()) return undelayed;
    const double out = line_[head_];
    line_[head_] = undelayed;
    head_ = (head_ + 1) % line_.size();
    return out;
  }

  /// Second-order section output that entered the delay line on the last
  /// step (the deflection the airframe will see one delay later).
  double last_undelayed() const noexcept { return last_undelayed_; }
  std::size_t delay_steps() const { return line_.size(); }
  const ActuatorParams& params() const noexcept { return params_; }

 private:
  ActuatorParams params_;
  Eigen::Matrix2d ad_;
  Eigen::Vector2d bd_;
  Eigen::Vector2d state_;
  std::vector<double> line_;
  std::size_t head_ = 0;
  double last_undelayed_ = 0.0;
};

}  // namespace pitchap
