#pragma once

// Conceptual-design calculators: wing planform, tail sizing by moment
// balance, static margin and control margin.

#include <cmath>
#include <numbers>
#include <string>

#include "pitchap/errors.hpp"

namespace pitchap {

/// Airframe geometry and inertia. Lengths in metres, areas in m^2, stations
/// measured aft from the nose tip.
struct MissileConfig {
  double diameter = 0.200;
  double length = 5.200;
  double nose_length = 1.000;
  double body_length = 4.000;
  double boattail_length = 0.200;
  double nozzle_exit_area = 0.015;
  // Full tip-to-tip span. The 444 mm configuration figure is one exposed
  // panel; the wing-area relation needs the full span.
  double wingspan = 0.888;
  double wing_area = 0.282;
  double tail_area = 0.0865;
  double reference_area = std::numbers::pi / 4.0 * 0.200 * 0.200;
  double aspect_ratio = 2.75;
  double mac_chord = 0.377;
  double x_cg = 2.500;
  double x_ac = 3.150;
  double x_mac = 2.750;
  double mass = 85.0;
  double inertia_zz = 40.0;
  double cruise_speed = 250.0;
  double mach = 0.85;
  double altitude = 6000.0;

  void validate() const {
    auto positive = [](double v, const char* key) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("must be positive and finite", key);
    };
    positive(diameter, "missile.diameter");
    positive(length, "missile.length");
    positive(nose_length, "missile.nose_length");
    positive(body_length, "missile.body_length");
    positive(boattail_length, "missile.boattail_length");
    positive(nozzle_exit_area, "missile.nozzle_exit_area");
    positive(wingspan, "missile.wingspan");
    positive(wing_area, "missile.wing_area");
    positive(tail_area, "missile.tail_area");
    positive(reference_area, "missile.reference_area");
    positive(aspect_ratio, "missile.aspect_ratio");
    positive(mac_chord, "missile.mac_chord");
    positive(x_cg, "missile.x_cg");
    positive(x_ac, "missile.x_ac");
    positive(x_mac, "missile.x_mac");
    positive(mass, "missile.mass");
    positive(inertia_zz, "missile.inertia_zz");
    positive(cruise_speed, "missile.cruise_speed");
    const double s_ref = std::numbers::pi / 4.0 * diameter * diameter;
    if (std::abs(reference_area - s_ref) > 1e-9 * s_ref)
      throw ConfigError("must equal pi/4 * diameter^2", "missile.reference_area");
    if (nose_length + body_length > length)
      throw ConfigError("nose_length + body_length exceeds length", "missile.length");
  }
};

/// Aerodynamic derivatives at zero incidence. The lift slope is
/// alpha-dependent: C_La(alpha) = lift_slope + lift_slope_alpha * alpha.
struct AeroDerivatives {
  double lift_coefficient = 0.924;  // C_L0
  double drag_coefficient = 0.603;  // C_D0
  double lift_slope = 0.524;        // per rad
  double lift_slope_alpha = 2.0;    // per rad^2
  double moment_alpha = -0.300;     // C_Ma, per rad
  double lift_delta = 0.208;        // C_Ld, per rad (not used by any force model)
  double moment_delta = 0.267;      // C_Md, per rad

  double lift_slope_at(double alpha) const { return lift_slope + lift_slope_alpha * alpha; }
  bool statically_stable() const { return moment_alpha < 0.0; }
};

/// Inputs of the tail-area moment balance. Stations in metres from the nose,
/// normal-force slopes per radian.
struct TailSizingInputs {
  double diameter = 0.200;
  double wing_area = 0.282;
  double reference_area = 0.0314;
  double x_cg = 2.600;
  double x_cp_body = 0.200;
  double x_cp_wing = 2.850;  // x_cg - x_cp_wing = -250 mm
  double x_cp_tail = 4.800;
  double x_ac = 3.150;
  double cn_alpha_body = 0.0;
  double cn_alpha_wing = 0.262;
  double cn_alpha_tail = 0.262;

  void validate() const {
    if (!(diameter > 0.0)) throw ConfigError("must be positive", "tail_sizing.diameter");
    if (!(wing_area > 0.0)) throw ConfigError("must be positive", "tail_sizing.wing_area");
    if (!(reference_area > 0.0))
      throw ConfigError("must be positive", "tail_sizing.reference_area");
    if (cn_alpha_tail == 0.0)
      throw ConfigError("tail normal-force slope must be non-zero", "tail_sizing.cn_alpha_tail");
  }
};

namespace detail {
inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(name) + " must be positive and finite");
}
}  // namespace detail

/// S_W = b^2 / AR.
inline double wing_area_from_span(double span, double aspect_ratio) {
  detail::require_positive(span, "span");
  detail::require_positive(aspect_ratio, "aspect ratio");
  return span * span / aspect_ratio;
}

/// b = sqrt(AR * S_W).
inline double span_from_area(double wing_area, double aspect_ratio) {
  detail::require_positive(wing_area, "wing area");
  detail::require_positive(aspect_ratio, "aspect ratio");
  return std::sqrt(aspect_ratio * wing_area);
}

/// AR = b^2 / S_W.
inline double aspect_ratio_from(double span, double wing_area) {
  detail::require_positive(span, "span");
  detail::require_positive(wing_area, "wing area");
  return span * span / wing_area;
}

/// Slender-wing normal-force slope (pi/2) * AR, per radian.
inline double slender_wing_cn_alpha(double aspect_ratio) {
  detail::require_positive(aspect_ratio, "aspect ratio");
  return std::numbers::pi / 2.0 * aspect_ratio;
}

/// Tail-to-reference area ratio from the pitching-moment balance. Every
/// moment arm is normalised by the body diameter; the three destabilising
/// contributions (body, wing, lift-at-AC) form the numerator and the tail
/// arm less the AC arm forms the denominator. The sign is returned as
/// computed.
inline double tail_area_ratio(const TailSizingInputs& in) {
  in.validate();
  const double d = in.diameter;
  const double area_ratio = in.wing_area / in.reference_area;
  const double ac_arm = (in.x_ac - in.x_cg) / d;

  const double body = in.cn_alpha_body * ((in.x_cg - in.x_cp_body) / d);
  const double wing = in.cn_alpha_wing * ((in.x_cg - in.x_cp_wing) / d) * area_ratio;
  const double lift = (in.cn_alpha_body + in.cn_alpha_wing * area_ratio) * ac_arm;
  const double tail_arm = in.cn_alpha_tail * ((in.x_cp_tail - in.x_cg) / d);
  const double denominator = tail_arm - ac_arm;

  if (denominator == 0.0 || std::abs(denominator) < 1e-12 * (std::abs(tail_arm) + std::abs(ac_arm))) {
    throw SingularConfigurationError(
        "tail sizing denominator vanishes: cn_alpha_tail*(x_cp_tail - x_cg)/d equals "
        "(x_ac - x_cg)/d",
        "cn_alpha_tail*(x_cp_tail - x_cg)/d - (x_ac - x_cg)/d");
  }
  return (body + wing + lift) / denominator;
}

/// Tail planform area |S_T/S_ref| * S_ref.
inline double tail_area(const TailSizingInputs& in) {
  return std::abs(tail_area_ratio(in)) * in.reference_area;
}

/// (X_AC - X_CG) / l_M. Positive means the aerodynamic centre sits aft of the
/// centre of gravity (statically stable).
inline double static_margin(double x_ac, double x_cg, double missile_length) {
  detail::require_positive(missile_length, "missile length");
  return (x_ac - x_cg) / missile_length;
}

/// Static margin in calibers, (X_AC - X_CG) / d.
inline double static_margin_calibers(double x_ac, double x_cg, double diameter) {
  detail::require_positive(diameter, "diameter");
  return (x_ac - x_cg) / diameter;
}

/// Adequate control margin: C_Ma < C_Md as a signed comparison.
inline bool check_control_margin(double moment_alpha, double moment_delta) {
  return moment_alpha < moment_delta;
}

/// Desirable static-margin window for a stable tail-controlled airframe.
inline constexpr double kStaticMarginMin = 0.05;
inline constexpr double kStaticMarginMax = 0.15;

struct SizingReport {
  double wing_area = 0.0;
  double tail_ratio = 0.0;
  double tail_area = 0.0;
  double static_margin = 0.0;
  double static_margin_calibers = 0.0;
  bool statically_stable = false;
  bool margin_in_window = false;
  bool control_margin = false;
};

inline SizingReport size_configuration(const MissileConfig& missile, const AeroDerivatives& aero,
                                       const TailSizingInputs& tail) {
  SizingReport r;
  r.wing_area = wing_area_from_span(missile.wingspan, missile.aspect_ratio);
  r.tail_ratio = tail_area_ratio(tail);
  r.tail_area = std::abs(r.tail_ratio) * tail.reference_area;
  r.static_margin = static_margin(missile.x_ac, missile.x_cg, missile.length);
  r.static_margin_calibers = static_margin_calibers(missile.x_ac, missile.x_cg, missile.diameter);
  r.statically_stable = r.static_margin > 0.0;
  r.margin_in_window = r.static_margin >= kStaticMarginMin && r.static_margin <= kStaticMarginMax;
  r.control_margin = check_control_margin(aero.moment_alpha, aero.moment_delta);
  return r;
}

}  // namespace pitchap
