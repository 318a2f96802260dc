#pragma once

#include <cmath>

#include "pitchap/errors.hpp"

namespace pitchap {

/// Phase-lead network (a*T*s + 1) / (T*s + 1).
struct CompensatorParams {
  bool enabled = true;
  double lead_ratio = 11.0;     // a
  double time_constant = 0.01;  // T, seconds

  void validate() const {
    if (!(lead_ratio > 0.0) || !std::isfinite(lead_ratio))
      throw ConfigError("must be positive", "loop.compensator.lead_ratio");
    if (!(time_constant > 0.0) || !std::isfinite(time_constant))
      throw ConfigError("must be positive", "loop.compensator.time_constant");
  }

  /// Frequency of maximum phase lead, 1 / (T * sqrt(a)).
  double peak_frequency() const { return 1.0 / (time_constant * std::sqrt(lead_ratio)); }
  /// Maximum phase lead in radians, asin((a - 1) / (a + 1)).
  double max_phase_lead() const { return std::asin((lead_ratio - 1.0) / (lead_ratio + 1.0)); }
};

/// Bilinear (Tustin) realisation of the lead network. DC gain is exactly one.
/// Starts at rest (zero input and output history).
class LeadCompensator {
 public:
  LeadCompensator(CompensatorParams params, double dt) : params_(params), dt_(dt) {
    params_.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (dt > params_.time_constant / 2.0)
      throw ConfigError("step exceeds half the lead time constant", "loop.compensator.time_constant");
    const double a = params_.lead_ratio;
    const double t = params_.time_constant;
    const double den = 2.0 * t + dt;
    b0_ = (2.0 * a * t + dt) / den;
    b1_ = (dt - 2.0 * a * t) / den;
    a1_ = (dt - 2.0 * t) / den;
  }

  double step(double input) {
    const double out = b0_ * input + b1_ * prev_in_ - a1_ * prev_out_;
    prev_in_ = input;
    prev_out_ = out;
    return out;
  }

  void reset() { prev_in_ = prev_out_ = 0.0; }

  const CompensatorParams& params() const noexcept { return params_; }

 private:
  CompensatorParams params_;
  double dt_;
  double b0_ = 1.0, b1_ = 0.0, a1_ = 0.0;
  double prev_in_ = 0.0;
  double prev_out_ = 0.0;
};

}  // namespace pitchap
