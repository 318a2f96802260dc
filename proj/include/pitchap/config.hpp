#pragma once

// JSON project configuration. Every key is optional and defaults to the
// reference airframe and autopilot; an empty document reproduces the
// compensated loop.
//
//   { "missile": {...}, "derivatives": {...}, "tail_sizing": {...},
//     "loop": { "pid": {...}, "compensator": {...}, "actuator": {...},
//               "plant": {...}, "disturbance": {...}, "noise": {...},
//               "kalman": {...} },
//     "scenario": {...} }

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "pitchap/aero_sizing.hpp"
#include "pitchap/errors.hpp"
#include "pitchap/sim_engine.hpp"

namespace pitchap {

struct ProjectConfig {
  MissileConfig missile;
  AeroDerivatives derivatives;
  TailSizingInputs tail_sizing;
  LoopConfig loop;
  Scenario scenario;

  void validate() const {
    missile.validate();
    tail_sizing.validate();
    loop.validate();
    scenario.validate();
  }
};

namespace detail {

using FieldRef = std::variant<double*, bool*, std::uint64_t*, ControlTap*, std::optional<std::uint64_t>*>;
using FieldMap = std::map<std::string, FieldRef, std::less<>>;

inline FieldMap field_map(ProjectConfig& c) {
  FieldMap m;
  auto& mi = c.missile;
  for (auto [k, p] : std::initializer_list<std::pair<const char*, double*>>{
           {"diameter", &mi.diameter}, {"length", &mi.length}, {"nose_length", &mi.nose_length},
           {"body_length", &mi.body_length}, {"boattail_length", &mi.boattail_length},
           {"nozzle_exit_area", &mi.nozzle_exit_area}, {"wingspan", &mi.wingspan},
           {"wing_area", &mi.wing_area}, {"tail_area", &mi.tail_area},
           {"reference_area", &mi.reference_area}, {"aspect_ratio", &mi.aspect_ratio},
           {"mac_chord", &mi.mac_chord}, {"x_cg", &mi.x_cg}, {"x_ac", &mi.x_ac},
           {"x_mac", &mi.x_mac}, {"mass", &mi.mass}, {"inertia_zz", &mi.inertia_zz},
           {"cruise_speed", &mi.cruise_speed}, {"mach", &mi.mach}, {"altitude", &mi.altitude}})
    m.emplace(std::string("missile.") + k, p);

  auto& de = c.derivatives;
  for (auto [k, p] : std::initializer_list<std::pair<const char*, double*>>{
           {"lift_coefficient", &de.lift_coefficient}, {"drag_coefficient", &de.drag_coefficient},
           {"lift_slope", &de.lift_slope}, {"lift_slope_alpha", &de.lift_slope_alpha},
           {"moment_alpha", &de.moment_alpha}, {"lift_delta", &de.lift_delta},
           {"moment_delta", &de.moment_delta}})
    m.emplace(std::string("derivatives.") + k, p);

  auto& ts = c.tail_sizing;
  for (auto [k, p] : std::initializer_list<std::pair<const char*, double*>>{
           {"diameter", &ts.diameter}, {"wing_area", &ts.wing_area},
           {"reference_area", &ts.reference_area}, {"x_cg", &ts.x_cg},
           {"x_cp_body", &ts.x_cp_body}, {"x_cp_wing", &ts.x_cp_wing},
           {"x_cp_tail", &ts.x_cp_tail}, {"x_ac", &ts.x_ac},
           {"cn_alpha_body", &ts.cn_alpha_body}, {"cn_alpha_wing", &ts.cn_alpha_wing},
           {"cn_alpha_tail", &ts.cn_alpha_tail}})
    m.emplace(std::string("tail_sizing.") + k, p);

  auto& lp = c.loop;
  for (auto [k, p] : std::initializer_list<std::pair<const char*, double*>>{
           {"pid.kp", &lp.pid.kp}, {"pid.ki", &lp.pid.ki}, {"pid.kd", &lp.pid.kd},
           {"pid.derivative_filter", &lp.pid.derivative_filter},
           {"compensator.lead_ratio", &lp.compensator.lead_ratio},
           {"compensator.time_constant", &lp.compensator.time_constant},
           {"actuator.gain", &lp.actuator.gain},
           {"actuator.natural_frequency", &lp.actuator.natural_frequency},
           {"actuator.damping", &lp.actuator.damping}, {"actuator.delay", &lp.actuator.delay},
           {"plant.inertia", &lp.plant.inertia}, {"plant.resistance", &lp.plant.resistance},
           {"disturbance.amplitude", &lp.disturbance.amplitude},
           {"disturbance.frequency", &lp.disturbance.frequency},
           {"noise.variance", &lp.noise.variance}, {"noise.sample_time", &lp.noise.sample_time},
           {"kalman.q_angle", &lp.kalman.q_angle}, {"kalman.q_rate", &lp.kalman.q_rate},
           {"kalman.r", &lp.kalman.r}, {"kalman.correlation_time", &lp.kalman.correlation_time},
           {"kalman.initial_rate_variance", &lp.kalman.initial_rate_variance}})
    m.emplace(std::string("loop.") + k, p);
  m.emplace("loop.compensator.enabled", &lp.compensator.enabled);
  m.emplace("loop.disturbance.enabled", &lp.disturbance.enabled);
  m.emplace("loop.noise.enabled", &lp.noise.enabled);
  m.emplace("loop.noise.seed", &lp.noise.seed);
  m.emplace("loop.kalman.enabled", &lp.kalman.enabled);
  m.emplace("loop.kalman.control_tap", &lp.kalman.control_tap);

  auto& sc = c.scenario;
  m.emplace("scenario.initial_pitch", &sc.initial_pitch);
  m.emplace("scenario.commanded_pitch", &sc.commanded_pitch);
  m.emplace("scenario.duration", &sc.duration);
  m.emplace("scenario.dt", &sc.dt);
  m.emplace("scenario.seed", &sc.seed);
  return m;
}

// 1-based line of the byte offset.
inline std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// Line of the last component of a dotted key, found by locating each quoted
// component after the previous one. Zero when not found.
inline std::size_t line_of_key(std::string_view text, std::string_view path) {
  std::size_t pos = 0;
  while (!path.empty()) {
    const std::size_t dot = path.find('.');
    const std::string needle = "\"" + std::string(path.substr(0, dot)) + "\"";
    pos = text.find(needle, pos);
    if (pos == std::string_view::npos) return 0;
    if (dot == std::string_view::npos) break;
    path.remove_prefix(dot + 1);
  }
  return line_at(text, pos);
}

inline const char* json_type(const nlohmann::json& v) { return v.type_name(); }

inline void assign(const FieldRef& ref, const nlohmann::json& v, const std::string& key) {
  auto wrong = [&](const char* expected) {
    return ConfigError(std::string("expected ") + expected + ", got " + json_type(v), key);
  };
  std::visit(
      [&](auto* field) {
        using T = std::remove_pointer_t<decltype(field)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!v.is_number()) throw wrong("number");
          *field = v.get<double>();
        } else if constexpr (std::is_same_v<T, bool>) {
          if (!v.is_boolean()) throw wrong("boolean");
          *field = v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (!v.is_number_unsigned()) throw wrong("non-negative integer");
          *field = v.get<std::uint64_t>();
        } else if constexpr (std::is_same_v<T, ControlTap>) {
          if (!v.is_string()) throw wrong("string");
          *field = control_tap_from_string(v.get<std::string>());
        } else {
          if (v.is_null()) {
            field->reset();
          } else {
            if (!v.is_number_unsigned()) throw wrong("non-negative integer or null");
            *field = v.get<std::uint64_t>();
          }
        }
      },
      ref);
}

inline void walk(const nlohmann::json& node, const std::string& prefix, FieldMap& fields,
                 std::string_view text) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    auto with_line = [&](const ConfigError& e) {
      const std::size_t line = line_of_key(text, e.key().empty() ? key : e.key());
      if (line == 0) return e;
      return ConfigError(e.reason() + " (line " + std::to_string(line) + ")", e.key());
    };
    auto found = fields.find(key);
    if (found != fields.end()) {
      try {
        assign(found->second, *it, key);
      } catch (const ConfigError& e) {
        throw with_line(e);
      }
      continue;
    }
    if (it->is_object()) {
      walk(*it, key, fields, text);
      continue;
    }
    throw with_line(ConfigError("unknown key", key));
  }
}

}  // namespace detail

/// Parses a configuration document. Syntax errors report the line; type and
/// unknown-key errors name the dotted key.
inline ProjectConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = detail::line_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(std::string("JSON syntax error: ") + e.what(), "line " + std::to_string(line));
  }
  if (doc.is_null()) doc = nlohmann::json::object();
  if (!doc.is_object()) throw ConfigError("top level must be an object", "<root>");

  ProjectConfig cfg;
  auto fields = detail::field_map(cfg);
  detail::walk(doc, "", fields, text);

  // Keep S_ref consistent with a changed diameter unless given explicitly.
  const auto missile = doc.find("missile");
  if (missile != doc.end() && missile->is_object() && !missile->contains("reference_area"))
    cfg.missile.reference_area = std::numbers::pi / 4.0 * cfg.missile.diameter * cfg.missile.diameter;
  return cfg;
}

inline ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Applies one "key=value" override. The key is a dotted path; loop keys
/// may omit the "loop." prefix. The value is read as JSON, falling back to
/// a bare string.
inline void apply_override(ProjectConfig& cfg, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key=value", std::string(assignment));
  std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  auto fields = detail::field_map(cfg);
  auto found = fields.find(key);
  if (found == fields.end()) {
    found = fields.find("loop." + key);
    if (found != fields.end()) key = "loop." + key;
  }
  if (found == fields.end()) throw ConfigError("unknown key", key);

  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  detail::assign(found->second, value, key);
  if (key == "missile.diameter")
    cfg.missile.reference_area = std::numbers::pi / 4.0 * cfg.missile.diameter * cfg.missile.diameter;
}

/// Full configuration with every key present.
inline nlohmann::json to_json(const ProjectConfig& cfg) {
  ProjectConfig copy = cfg;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, ref] : detail::field_map(copy)) {
    nlohmann::json* node = &out;
    std::string_view rest = key;
    for (std::size_t dot; (dot = rest.find('.')) != std::string_view::npos;) {
      node = &(*node)[std::string(rest.substr(0, dot))];
      rest.remove_prefix(dot + 1);
    }
    nlohmann::json& leaf = (*node)[std::string(rest)];
    std::visit(
        [&](auto* field) {
          using T = std::remove_pointer_t<decltype(field)>;
          if constexpr (std::is_same_v<T, ControlTap>) {
            leaf = std::string(to_string(*field));
          } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
            leaf = field->has_value() ? nlohmann::json(**field) : nlohmann::json(nullptr);
          } else {
            leaf = *field;
          }
        },
        ref);
  }
  return out;
}

}  // namespace pitchap
