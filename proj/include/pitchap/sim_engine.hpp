#pragma once

// Closed pitch loop:
//
//   cmd -> (+) -> PID -> lead -> actuator (2nd order + delay) -> plant
//           ^-                                                    |
//           +---- Kalman <---- (+ noise) <------------------------+
//
// Within one step the blocks run in the order error, PID, lead, actuator,
// plant, noise, Kalman. The error junction sees the estimate produced at the
// end of the previous step.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pitchap/blocks.hpp"
#include "pitchap/dynamics.hpp"
#include "pitchap/errors.hpp"

namespace pitchap {

struct LoopConfig {
  PidGains pid;
  CompensatorParams compensator;
  ActuatorParams actuator;
  PitchPlantParams plant;
  DisturbanceParams disturbance;
  NoiseParams noise;
  KalmanParams kalman;

  void validate() const {
    pid.validate();
    compensator.validate();
    actuator.validate();
    plant.validate();
    disturbance.validate();
    noise.validate();
    kalman.validate();
  }
};

struct Scenario {
  double initial_pitch = 10.0;   // deg
  double commanded_pitch = 1.0;  // deg
  double duration = 10.0;        // s
  double dt = 0.001;             // s
  std::optional<std::uint64_t> seed;  // overrides loop.noise.seed when set

  // Resolves omega_n = 50 rad/s dynamics with margin.
  static constexpr double kMaxStep = 0.005;

  void validate() const {
    if (!std::isfinite(initial_pitch)) throw ConfigError("must be finite", "scenario.initial_pitch");
    if (!std::isfinite(commanded_pitch))
      throw ConfigError("must be finite", "scenario.commanded_pitch");
    if (!(duration > 0.0) || !std::isfinite(duration))
      throw ConfigError("must be positive", "scenario.duration");
    if (!(dt > 0.0) || dt > duration) throw ConfigError("must satisfy 0 < dt <= duration", "scenario.dt");
    if (dt > kMaxStep * (1.0 + 1e-12)) throw ConfigError("must not exceed 0.005 s", "scenario.dt");
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }
};

/// One sample per step for every loop signal. Row k is time k*dt; the
/// control signals in row k are those computed at that instant and held
/// over the following interval.
struct Trace {
  std::vector<double> t;
  std::vector<double> cmd;
  std::vector<double> omega;
  std::vector<double> omega_dot;
  std::vector<double> omega_meas;
  std::vector<double> omega_filt;
  std::vector<double> error;
  std::vector<double> u_pid;
  std::vector<double> u_lead;
  std::vector<double> delta;
  std::vector<double> d_t;

  std::size_t size() const noexcept { return t.size(); }
  bool empty() const noexcept { return t.empty(); }

  void reserve(std::size_t n) {
    for (auto* col : columns()) col->reserve(n);
  }

  std::vector<std::vector<double>*> columns() {
    return {&t, &cmd, &omega, &omega_dot, &omega_meas, &omega_filt,
            &error, &u_pid, &u_lead, &delta, &d_t};
  }
  std::vector<const std::vector<double>*> columns() const {
    return {&t, &cmd, &omega, &omega_dot, &omega_meas, &omega_filt,
            &error, &u_pid, &u_lead, &delta, &d_t};
  }

  static constexpr const char* kHeader =
      "t,cmd,omega,omega_dot,omega_meas,omega_filt,error,u_pid,u_lead,delta,d_t";

  friend bool operator==(const Trace&, const Trace&) = default;
};

namespace detail {
inline void check_finite(double v, std::size_t step, const char* signal) {
  // Runaway magnitudes count as divergence alongside inf/nan.
  constexpr double kRunaway = 1e12;
  if (!std::isfinite(v) || std::abs(v) > kRunaway) throw DivergedRunError(step, signal);
}
}  // namespace detail

/// Simulates the loop for one scenario. Throws DivergedRunError carrying the
/// step index when any signal becomes non-finite.
inline Trace run_scenario(const LoopConfig& config, const Scenario& scenario) {
  config.validate();
  scenario.validate();
  const double dt = scenario.dt;
  const std::size_t n = scenario.steps();
  if (config.noise.enabled) whole_steps(config.noise.sample_time, dt, "loop.noise.sample_time");

  PidController pid(config.pid);
  std::optional<LeadCompensator> lead;
  if (config.compensator.enabled) lead.emplace(config.compensator, dt);
  ActuatorModel actuator(config.actuator, dt, 0.0);
  HeldNoise noise(config.noise, scenario.seed.value_or(config.noise.seed));
  PitchState state{scenario.initial_pitch, 0.0};
  PitchKalmanFilter kalman(config.kalman, config.plant, dt, state);

  const double cmd = scenario.commanded_pitch;
  double measured = state.angle + noise.sample(0.0);
  double filtered = config.kalman.enabled ? kalman.update(measured) : measured;

  Trace tr;
  tr.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double error = cmd - filtered;
    const double u_pid = pid.step(error, dt);
    const double u_lead = lead ? lead->step(u_pid) : u_pid;
    const double delta = actuator.step(u_lead);
    const double dist = disturbance_at(config.disturbance, t);

    detail::check_finite(error, k, "error");
    detail::check_finite(u_pid, k, "u_pid");
    detail::check_finite(u_lead, k, "u_lead");
    detail::check_finite(delta, k, "delta");

    tr.t.push_back(t);
    tr.cmd.push_back(cmd);
    tr.omega.push_back(state.angle);
    tr.omega_dot.push_back(state.rate);
    tr.omega_meas.push_back(measured);
    tr.omega_filt.push_back(filtered);
    tr.error.push_back(error);
    tr.u_pid.push_back(u_pid);
    tr.u_lead.push_back(u_lead);
    tr.delta.push_back(delta);
    tr.d_t.push_back(dist);
    if (k == n) break;

    state = rk4_step(config.plant, state, delta, dist, dt);
    detail::check_finite(state.angle, k + 1, "omega");
    detail::check_finite(state.rate, k + 1, "omega_dot");

    measured = state.angle + noise.sample(static_cast<double>(k + 1) * dt);
    if (config.kalman.enabled) {
      const double tap =
          config.kalman.control_tap == ControlTap::kPlant ? delta : actuator.last_undelayed();
      filtered = kalman.step(measured, tap);
    } else {
      filtered = measured;
    }
    detail::check_finite(filtered, k + 1, "omega_filt");
  }
  return tr;
}

struct AbTraces {
  Trace a;  // compensator disabled
  Trace b;  // compensator enabled
};

inline LoopConfig with_compensator(LoopConfig config, bool enabled) {
  config.compensator.enabled = enabled;
  return config;
}

/// Runs the same configuration and seed without (A) and with (B) the lead
/// compensator.
inline AbTraces run_ab_pair(const LoopConfig& config, const Scenario& scenario) {
  AbTraces out;
  try {
    out.a = run_scenario(with_compensator(config, false), scenario);
  } catch (const DivergedRunError& e) {
    throw e.with_leg("A");
  }
  try {
    out.b = run_scenario(with_compensator(config, true), scenario);
  } catch (const DivergedRunError& e) {
    throw e.with_leg("B");
  }
  return out;
}

struct DelayVerdict {
  double delay = 0.0;
  bool stable = false;
  std::optional<std::size_t> diverged_at;  // step index when the run blew up
  double initial_error = 0.0;
  double final_error = 0.0;
};

/// Reruns the scenario at each actuator delay. A delay is unstable when the
/// run diverges or the final error magnitude exceeds the initial one.
/// Delays are evaluated concurrently; results keep the input order.
inline std::vector<DelayVerdict> stability_probe(const LoopConfig& config, const Scenario& scenario,
                                                 const std::vector<double>& delays) {
  for (double d : delays) whole_steps(d, scenario.dt, "loop.actuator.delay");
  auto probe = [&config, &scenario](double delay) {
    LoopConfig c = config;
    c.actuator.delay = delay;
    DelayVerdict v;
    v.delay = delay;
    try {
      const Trace tr = run_scenario(c, scenario);
      v.initial_error = std::abs(scenario.commanded_pitch - tr.omega.front());
      v.final_error = std::abs(scenario.commanded_pitch - tr.omega.back());
      v.stable = v.final_error <= v.initial_error;
    } catch (const DivergedRunError& e) {
      v.diverged_at = e.step();
      v.stable = false;
    }
    return v;
  };
  std::vector<std::future<DelayVerdict>> jobs;
  jobs.reserve(delays.size());
  for (double d : delays) jobs.push_back(std::async(std::launch::async, probe, d));
  std::vector<DelayVerdict> out;
  out.reserve(delays.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Smallest probed delay judged unstable, if any.
inline std::optional<double> first_unstable_delay(const std::vector<DelayVerdict>& verdicts) {
  for (const auto& v : verdicts)
    if (!v.stable) return v.delay;
  return std::nullopt;
}

}  // namespace pitchap
