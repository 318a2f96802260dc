#pragma once

// Dotted-path access to the scalar fields of LoopConfig, shared by sweeps and
// command-line overrides. Paths may be written with or without the leading
// "loop." section name.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pitchap/sim_engine.hpp"

namespace pitchap {

namespace detail {

struct NumberField {
  std::string_view path;
  double& (*get)(LoopConfig&);
};

struct FlagField {
  std::string_view path;
  bool& (*get)(LoopConfig&);
};

#define PITCHAP_NUMBER(name, member) \
  NumberField { name, [](LoopConfig& c) -> double& { return c.member; } }
#define PITCHAP_FLAG(name, member) \
  FlagField { name, [](LoopConfig& c) -> bool& { return c.member; } }

inline constexpr std::array kNumberFields = {
    PITCHAP_NUMBER("pid.kp", pid.kp),
    PITCHAP_NUMBER("pid.ki", pid.ki),
    PITCHAP_NUMBER("pid.kd", pid.kd),
    PITCHAP_NUMBER("pid.derivative_filter", pid.derivative_filter),
    PITCHAP_NUMBER("compensator.lead_ratio", compensator.lead_ratio),
    PITCHAP_NUMBER("compensator.time_constant", compensator.time_constant),
    PITCHAP_NUMBER("actuator.gain", actuator.gain),
    PITCHAP_NUMBER("actuator.natural_frequency", actuator.natural_frequency),
    PITCHAP_NUMBER("actuator.damping", actuator.damping),
    PITCHAP_NUMBER("actuator.delay", actuator.delay),
    PITCHAP_NUMBER("plant.inertia", plant.inertia),
    PITCHAP_NUMBER("plant.resistance", plant.resistance),
    PITCHAP_NUMBER("disturbance.amplitude", disturbance.amplitude),
    PITCHAP_NUMBER("disturbance.frequency", disturbance.frequency),
    PITCHAP_NUMBER("noise.variance", noise.variance),
    PITCHAP_NUMBER("noise.sample_time", noise.sample_time),
    PITCHAP_NUMBER("kalman.q_angle", kalman.q_angle),
    PITCHAP_NUMBER("kalman.q_rate", kalman.q_rate),
    PITCHAP_NUMBER("kalman.r", kalman.r),
    PITCHAP_NUMBER("kalman.correlation_time", kalman.correlation_time),
    PITCHAP_NUMBER("kalman.initial_rate_variance", kalman.initial_rate_variance),
};

inline constexpr std::array kFlagFields = {
    PITCHAP_FLAG("compensator.enabled", compensator.enabled),
    PITCHAP_FLAG("disturbance.enabled", disturbance.enabled),
    PITCHAP_FLAG("noise.enabled", noise.enabled),
    PITCHAP_FLAG("kalman.enabled", kalman.enabled),
};

#undef PITCHAP_NUMBER
#undef PITCHAP_FLAG

inline std::string_view strip_loop_prefix(std::string_view path) {
  constexpr std::string_view kPrefix = "loop.";
  if (path.substr(0, kPrefix.size()) == kPrefix) path.remove_prefix(kPrefix.size());
  return path;
}

}  // namespace detail

/// Numeric field at `path`, or nullptr when the path names no numeric field.
inline double* find_loop_number(LoopConfig& config, std::string_view path) {
  const std::string_view key = detail::strip_loop_prefix(path);
  for (const auto& f : detail::kNumberFields)
    if (f.path == key) return &f.get(config);
  return nullptr;
}

/// Boolean switch at `path`, or nullptr.
inline bool* find_loop_flag(LoopConfig& config, std::string_view path) {
  const std::string_view key = detail::strip_loop_prefix(path);
  for (const auto& f : detail::kFlagFields)
    if (f.path == key) return &f.get(config);
  return nullptr;
}

inline std::vector<std::string> loop_number_paths() {
  std::vector<std::string> out;
  for (const auto& f : detail::kNumberFields) out.emplace_back(f.path);
  return out;
}

/// Copy of `config` with the numeric field at `path` set to `value`.
/// Throws ConfigError when the path does not resolve.
inline LoopConfig with_loop_number(LoopConfig config, std::string_view path, double value) {
  double* field = find_loop_number(config, path);
  if (field == nullptr)
    throw ConfigError("not a numeric loop parameter", "loop." + std::string(detail::strip_loop_prefix(path)));
  *field = value;
  return config;
}

}  // namespace pitchap
