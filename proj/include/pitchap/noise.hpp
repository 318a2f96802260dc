#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pitchap/errors.hpp"

namespace pitchap {

/// Zero-mean measurement noise, redrawn every `sample_time` and held between
/// draws. Variance in deg^2.
struct NoiseParams {
  bool enabled = true;
  double variance = 0.1;
  double sample_time = 0.01;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(variance >= 0.0) || !std::isfinite(variance))
      throw ConfigError("must be non-negative", "loop.noise.variance");
    if (!(sample_time > 0.0) || !std::isfinite(sample_time))
      throw ConfigError("must be positive", "loop.noise.sample_time");
  }
};

/// Zero-order-hold white noise source. Queries must be made at
/// non-decreasing times; the sequence is fully determined by the seed.
class HeldNoise {
 public:
  HeldNoise(NoiseParams params, std::uint64_t seed)
      : params_(params), rng_(seed), normal_(0.0, std::sqrt(params.variance)) {
    params_.validate();
  }
  explicit HeldNoise(NoiseParams params) : HeldNoise(params, params.seed) {}

  double sample(double t) {
    if (!(t >= 0.0)) throw DomainError("noise time must be non-negative");
    if (!params_.enabled || params_.variance == 0.0) return 0.0;
    // Small slack so t = k*sample_time lands in interval k despite rounding.
    const auto interval = static_cast<std::int64_t>(std::floor(t / params_.sample_time + 1e-9));
    if (interval < interval_) throw DomainError("noise queried backwards in time");
    while (interval_ < interval) {
      held_ = normal_(rng_);
      ++interval_;
    }
    return held_;
  }

  const NoiseParams& params() const noexcept { return params_; }

 private:
  NoiseParams params_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::int64_t interval_ = -1;
  double held_ = 0.0;
};

/// Sinusoidal disturbance torque amplitude * sin(frequency * t).
struct DisturbanceParams {
  bool enabled = true;
  double amplitude = 1.0;
  double frequency = 1.0;  // rad/s

  void validate() const {
    if (!(amplitude >= 0.0)) throw ConfigError("must be non-negative", "loop.disturbance.amplitude");
    if (!(frequency >= 0.0)) throw ConfigError("must be non-negative", "loop.disturbance.frequency");
  }
};

inline double disturbance_at(const DisturbanceParams& p, double t) {
  if (!p.enabled) return 0.0;
  return p.amplitude * std::sin(p.frequency * t);
}

}  // namespace pitchap
