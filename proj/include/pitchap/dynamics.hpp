#pragma once

// Continuous-time physical models. The pitch loop works in degrees with the
// loop's own torque units; the translational and hinge-moment calculators
// use SI.

#include <cmath>
#include <utility>

#include "pitchap/aero_sizing.hpp"
#include "pitchap/errors.hpp"

namespace pitchap {

inline constexpr double kGravity = 9.81;

/// Rotational plant J*w'' = c - lambda*w' - d.
struct PitchPlantParams {
  double inertia = 40.0;     // J_z
  double resistance = 6.0;   // lambda, torque per unit pitch rate

  void validate() const {
    if (!(inertia > 0.0) || !std::isfinite(inertia))
      throw ConfigError("must be positive", "loop.plant.inertia");
    if (!(resistance >= 0.0) || !std::isfinite(resistance))
      throw ConfigError("must be non-negative", "loop.plant.resistance");
  }
};

struct PitchState {
  double angle = 0.0;  // deg
  double rate = 0.0;   // deg/s

  friend bool operator==(const PitchState&, const PitchState&) = default;
};

/// (w', w'') for control torque c and disturbance torque d.
inline PitchState pitch_plant_deriv(const PitchPlantParams& p, const PitchState& s,
                                    double control, double disturbance) {
  return {s.rate, control / p.inertia - p.resistance / p.inertia * s.rate -
                      disturbance / p.inertia};
}

/// One classical fourth-order Runge-Kutta step with c and d held over dt.
inline PitchState rk4_step(const PitchPlantParams& p, const PitchState& s, double control,
                           double disturbance, double dt) {
  auto f = [&](const PitchState& x) { return pitch_plant_deriv(p, x, control, disturbance); };
  auto axpy = [](const PitchState& x, double h, const PitchState& k) {
    return PitchState{x.angle + h * k.angle, x.rate + h * k.rate};
  };
  const PitchState k1 = f(s);
  const PitchState k2 = f(axpy(s, dt / 2.0, k1));
  const PitchState k3 = f(axpy(s, dt / 2.0, k2));
  const PitchState k4 = f(axpy(s, dt, k3));
  return {s.angle + dt / 6.0 * (k1.angle + 2.0 * k2.angle + 2.0 * k3.angle + k4.angle),
          s.rate + dt / 6.0 * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate)};
}

/// Force and mass state for the reduced translational equations.
struct FlightPoint {
  double thrust = 0.0;  // N
  double drag = 0.0;    // N
  double lift = 0.0;    // N
  double alpha = 0.0;   // rad
  double mass = 85.0;   // kg
  double gravity = kGravity;
  double vx_body = 0.0;  // m/s
  double vy_body = 0.0;  // m/s
};

/// Body-axis accelerations in G (the equations divide by g*m). The y
/// component is the normal acceleration a_N.
struct BodyAccel {
  double axial = 0.0;
  double normal = 0.0;
};

inline BodyAccel translational_accel(const FlightPoint& fp) {
  if (!(fp.mass > 0.0)) throw DomainError("mass must be positive");
  if (!(fp.gravity > 0.0)) throw DomainError("gravity must be positive");
  const double gm = fp.gravity * fp.mass;
  const double ca = std::cos(fp.alpha);
  const double sa = std::sin(fp.alpha);
  // Sign convention kept exactly as in the reduced model: both normal terms add.
  return {(fp.thrust - fp.drag * ca + fp.lift * sa) / gm, (fp.drag * sa + fp.lift * ca) / gm};
}

inline double resultant_speed(double vx_body, double vy_body) {
  return std::hypot(vx_body, vy_body);
}

/// Flight-path turn rate a_N / V in rad/s (a_N in m/s^2).
inline double flight_path_rate(double normal_accel, double speed) {
  if (!(speed > 0.0)) throw DomainError("speed must be positive");
  return normal_accel / speed;
}

struct LiftDrag {
  double lift = 0.0;  // N
  double drag = 0.0;  // N
};

/// L = q*S_W*(C_L0 + C_La(alpha)*alpha), D = q*S_ref*C_D0. No induced drag.
inline LiftDrag lift_drag(double dynamic_pressure, double alpha, const MissileConfig& config,
                          const AeroDerivatives& derivs) {
  if (!(dynamic_pressure >= 0.0)) throw DomainError("dynamic pressure must be non-negative");
  const double cl = derivs.lift_coefficient + derivs.lift_slope_at(alpha) * alpha;
  return {dynamic_pressure * config.wing_area * cl,
          dynamic_pressure * config.reference_area * derivs.drag_coefficient};
}

struct HingeMomentInputs {
  double elevator_area = 0.0865;     // S_T, m^2
  double dynamic_pressure = 23811;   // q, Pa
  double hinge_arm = 0.069;          // d_E, m
  double moment_delta = 0.267;       // C_Md
  double moment_alpha = -0.300;      // C_Ma
  double alpha_per_delta = 0.0;      // static alpha(s)/delta(s) ratio

  void validate() const {
    if (!(elevator_area > 0.0)) throw ConfigError("must be positive", "hinge.elevator_area");
    if (!(dynamic_pressure >= 0.0))
      throw ConfigError("must be non-negative", "hinge.dynamic_pressure");
    if (!(hinge_arm > 0.0)) throw ConfigError("must be positive", "hinge.hinge_arm");
  }
};

/// Static gain of the hinge-moment transfer function, N*m per rad of deflection.
inline double hinge_moment_gain(const HingeMomentInputs& in) {
  in.validate();
  return in.elevator_area * in.dynamic_pressure * in.hinge_arm *
         (in.moment_delta + in.moment_alpha * in.alpha_per_delta);
}

}  // namespace pitchap
