#pragma once

#include <cmath>
#include <string_view>

#include <Eigen/Dense>

#include "pitchap/discretize.hpp"
#include "pitchap/dynamics.hpp"
#include "pitchap/errors.hpp"

namespace pitchap {

/// Which control signal drives the filter's prediction.
enum class ControlTap {
  kPlant,     // deflection actually reaching the airframe (after the delay line)
  kPreDelay,  // second-order actuator output entering the delay line
};

inline std::string_view to_string(ControlTap tap) {
  return tap == ControlTap::kPlant ? "plant" : "pre_delay";
}

inline ControlTap control_tap_from_string(std::string_view s) {
  if (s == "plant") return ControlTap::kPlant;
  if (s == "pre_delay") return ControlTap::kPreDelay;
  throw ConfigError("expected \"plant\" or \"pre_delay\"", "loop.kalman.control_tap");
}

/// Process-noise intensities for pitch angle and pitch rate, measurement
/// variance in deg^2. The measurement noise is treated as white over
/// `correlation_time`, so the per-step variance is r * correlation_time / dt
/// and the filter's continuous-time behaviour does not depend on dt.
struct KalmanParams {
  bool enabled = true;
  double q_angle = 0.015;
  double q_rate = 0.02;
  double r = 0.1;
  double correlation_time = 0.01;  // s
  // Prior variance of the rate state; the angle prior uses r.
  double initial_rate_variance = 50.0;
  ControlTap control_tap = ControlTap::kPreDelay;

  void validate() const {
    if (!(q_angle >= 0.0) || !std::isfinite(q_angle))
      throw ConfigError("must be non-negative", "loop.kalman.q_angle");
    if (!(q_rate >= 0.0) || !std::isfinite(q_rate))
      throw ConfigError("must be non-negative", "loop.kalman.q_rate");
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("must be positive", "loop.kalman.r");
    if (!(correlation_time > 0.0) || !std::isfinite(correlation_time))
      throw ConfigError("must be positive", "loop.kalman.correlation_time");
    if (!(initial_rate_variance >= 0.0) || !std::isfinite(initial_rate_variance))
      throw ConfigError("must be non-negative", "loop.kalman.initial_rate_variance");
  }
};

/// Linear Kalman filter on [pitch, pitch rate] with the rotational plant
/// (no disturbance) as process model and the pitch angle as measurement.
class PitchKalmanFilter {
 public:
  PitchKalmanFilter(KalmanParams params, PitchPlantParams plant, double dt,
                    PitchState initial = {})
      : params_(params) {
    params_.validate();
    plant.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    Eigen::Matrix2d a;
    a << 0.0, 1.0, 0.0, -plant.resistance / plant.inertia;
    const Eigen::Vector2d b(0.0, 1.0 / plant.inertia);
    const auto zoh = zoh_discretize<2>(a, b, dt);
    f_ = zoh.Ad;
    g_ = zoh.Bd;
    q_ = Eigen::Vector2d(params_.q_angle * dt, params_.q_rate * dt).asDiagonal();
    r_step_ = params_.r * params_.correlation_time / dt;
    x_ << initial.angle, initial.rate;
    p_ = Eigen::Vector2d(params_.r, params_.initial_rate_variance).asDiagonal();
  }

  void predict(double control) {
    x_ = f_ * x_ + g_ * control;
    p_ = f_ * p_ * f_.transpose() + q_;
  }

  /// Measurement update; returns the posterior pitch estimate.
  double update(double measurement) {
    const double innovation_var = p_(0, 0) + r_step_;
    gain_ = p_.col(0) / innovation_var;
    x_ += gain_ * (measurement - x_(0));
    // Joseph form keeps P symmetric positive definite.
    Eigen::Matrix2d ikh = Eigen::Matrix2d::Identity();
    ikh.col(0) -= gain_;
    p_ = ikh * p_ * ikh.transpose() + r_step_ * gain_ * gain_.transpose();
    return x_(0);
  }

  double step(double measurement, double control) {
    predict(control);
    return update(measurement);
  }

  PitchState estimate() const { return {x_(0), x_(1)}; }
  const Eigen::Matrix2d& covariance() const noexcept { return p_; }
  const Eigen::Vector2d& gain() const noexcept { return gain_; }
  const Eigen::Matrix2d& transition() const noexcept { return f_; }
  const Eigen::Vector2d& input_matrix() const noexcept { return g_; }
  const Eigen::Matrix2d& process_noise() const noexcept { return q_; }
  double measurement_variance() const noexcept { return r_step_; }
  const KalmanParams& params() const noexcept { return params_; }

 private:
  KalmanParams params_;
  Eigen::Matrix2d f_;
  Eigen::Vector2d g_;
  Eigen::Matrix2d q_;
  double r_step_ = 0.0;
  Eigen::Vector2d x_;
  Eigen::Matrix2d p_;
  Eigen::Vector2d gain_ = Eigen::Vector2d::Zero();
};

}  // namespace pitchap
