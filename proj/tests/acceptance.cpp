// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pitchap/pitchap.hpp"

using namespace pitchap;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  if (!ok) ++failures;
}

std::string f(double v, int p = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", p, v);
  return buf;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

LoopConfig quiet_loop() {
  LoopConfig c;
  c.noise.enabled = false;
  c.disturbance.enabled = false;
  return c;
}

const BandSpec kBand = band_for_step(10.0, 1.0, 0.05);

StepMetrics measure(const Trace& tr) { return step_metrics(tr, 10.0, 1.0, kBand); }

void criterion_reference_metrics(const StepMetrics& a, const StepMetrics& b) {
  struct Check {
    const char* what;
    double value;
    double target;
    double tol;
  };
  const std::vector<Check> checks = {
      {"B t_r", b.rise_time.value_or(NAN), 0.280, 0.20},
      {"B t_p", b.peak_time.value_or(NAN), 0.430, 0.20},
      {"B t_s", b.settling_time.value_or(NAN), 2.500, 0.20},
      {"B M_p", b.peak_overshoot, 3.7, 0.25},
      {"B %M_p", b.percent_overshoot.value_or(NAN), 370.0, 0.25},
      {"A t_r", a.rise_time.value_or(NAN), 0.355, 0.20},
      {"A t_p", a.peak_time.value_or(NAN), 0.660, 0.20},
      {"A t_s", a.settling_time.value_or(NAN), 2.780, 0.20},
      {"A M_p", a.peak_overshoot, 7.9, 0.25},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : checks) {
    const bool hit = within(c.value, c.target, c.tol);
    ok = ok && hit;
    detail += std::string(c.what) + "=" + f(c.value) + (hit ? "" : "(!)") + " ";
  }
  report(1, "reference step metrics", ok, detail);
}

void criterion_ordinal(const StepMetrics& a, const StepMetrics& b) {
  const double tr_a = a.rise_time.value_or(NAN), tr_b = b.rise_time.value_or(NAN);
  const double ts_a = a.settling_time.value_or(NAN), ts_b = b.settling_time.value_or(NAN);
  const double itr = (tr_a - tr_b) / tr_a;
  const double its = (ts_a - ts_b) / ts_a;
  const bool ok = tr_b < tr_a && ts_b < ts_a && b.peak_overshoot < a.peak_overshoot && itr >= 0.10 &&
                  itr <= 0.35 && its >= 0.03 && its <= 0.20;
  report(2, "A/B ordering and improvements", ok,
         "t_r improvement " + f(100 * itr, 1) + "%, t_s improvement " + f(100 * its, 1) +
             "%, M_p " + f(a.peak_overshoot) + " -> " + f(b.peak_overshoot));
}

// The disturbance torque enters the plant without delay, so the exact hold
// is checked on disturbance-free traces; the disturbed trace is reported.
void criterion_delay_hold(const std::vector<const Trace*>& traces, const Trace& disturbed) {
  bool ok = true;
  std::size_t checked = 0;
  for (const Trace* tr : traces) {
    for (std::size_t i = 0; i < tr->size() && tr->t[i] < 0.1; ++i) {
      ok = ok && tr->omega[i] == 10.0;
      ++checked;
    }
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < disturbed.size() && disturbed.t[i] < 0.1; ++i)
    drift = std::max(drift, std::abs(disturbed.omega[i] - 10.0));
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2e", drift);
  report(3, "delay hold at 10 deg for t < 0.1 s", ok,
         std::to_string(checked) + " samples over " + std::to_string(traces.size()) +
             " traces; with the sine disturbance on, max drift " + buf + " deg");
}

void criterion_requirements(const StepMetrics& b) {
  const bool ok = b.meets_rise && !b.meets_overshoot && b.meets_accuracy;
  report(4, "requirement verdicts for B", ok,
         std::string("(1) ") + (b.meets_rise ? "pass" : "fail") + " (2) " +
             (b.meets_overshoot ? "pass" : "fail") + " (3) " + (b.meets_accuracy ? "pass" : "fail"));
}

void criterion_band() {
  const BandSpec band = band_for_step(10, 1, 0.05);
  report(5, "tolerance band", band.half_width == 0.45, "half-width " + f(band.half_width, 17));
}

void criterion_probe() {
  std::vector<double> delays;
  for (int i = 0; i <= 10; ++i) delays.push_back(0.05 * i);
  const auto verdicts = stability_probe(quiet_loop(), Scenario{}, delays);
  bool stable_at_100 = false;
  for (const auto& v : verdicts)
    if (std::abs(v.delay - 0.1) < 1e-12) stable_at_100 = v.stable;
  const auto first = first_unstable_delay(verdicts);
  const bool ok = stable_at_100 && first && *first >= 0.1;
  std::string grid;
  for (const auto& v : verdicts) grid += f(v.delay, 2) + (v.stable ? ":S " : ":U ");
  report(6, "stability probe", ok,
         std::string("stable at 0.10 s: ") + (stable_at_100 ? "yes" : "no") + ", first unstable " +
             (first ? f(*first, 2) + " s" : std::string("none")) + " [" + grid + "]");
}

void criterion_noise() {
  LoopConfig c;
  c.disturbance.enabled = false;
  int wins = 0, in_bracket = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s;
    s.seed = seed;
    const AbTraces ab = run_ab_pair(c, s);
    const NoiseEnvelope ea = noise_envelope(ab.a, 5.0);
    const NoiseEnvelope eb = noise_envelope(ab.b, 5.0);
    wins += eb.peak_to_peak() > ea.peak_to_peak();
    in_bracket += eb.max >= 0.08 && eb.max <= 0.35 && -eb.min >= 0.10 && -eb.min <= 0.40;
    detail += "s" + std::to_string(seed) + " A " + f(ea.peak_to_peak()) + " B " + f(eb.peak_to_peak()) +
              " [" + f(eb.max) + "," + f(eb.min) + "]; ";
  }
  report(7, "noise amplification", wins == 10 && in_bracket >= 8,
         "B>A on " + std::to_string(wins) + "/10 seeds, B in bracket on " + std::to_string(in_bracket) +
             "/10: " + detail);
}

void criterion_sizing() {
  const TailSizingInputs in;
  const double ratio = tail_area_ratio(in);
  const double area = tail_area(in);
  const double sm = static_margin(3.150, 2.500, 5.200);
  const bool cm = check_control_margin(-0.300, 0.267);
  const bool ok = within(ratio, -2.754, 0.005) && within(area, 0.0865, 0.005) &&
                  std::abs(sm - 0.125) <= 1e-12 && cm;
  report(8, "sizing", ok,
         "tail ratio " + f(ratio, 4) + " (expect -2.754), tail area " + f(area, 4) +
             " m^2 (expect 0.0865), static margin " + f(100 * sm, 3) + "%, control margin " +
             (cm ? "pass" : "fail"));
}

void criterion_oracles() {
  std::string detail;
  bool ok = true;

  // Unit-step peak of n*wn^2/(s^2 + 2 mu wn s + wn^2) against its closed form.
  {
    const ActuatorParams p;
    const double dt = 1e-5;
    ActuatorModel act(p, dt);
    double peak = 0.0, t_peak = 0.0;
    // The k-th output is the undelayed response at k*dt - delay.
    for (int k = 0; k * dt <= 0.5; ++k) {
      const double y = act.step(1.0);
      if (y > peak) {
        peak = y;
        t_peak = k * dt;
      }
    }
    const double zeta = p.damping, wn = p.natural_frequency;
    const double wd = wn * std::sqrt(1 - zeta * zeta);
    const double peak_cf = p.gain * (1 + std::exp(-std::numbers::pi * zeta / std::sqrt(1 - zeta * zeta)));
    const double tp_cf = p.delay + std::numbers::pi / wd;
    const bool hit = within(peak, peak_cf, 0.005) && within(t_peak, tp_cf, 0.005) &&
                     within(peak, 8.141, 0.005) && within(t_peak, 0.1726, 0.005);
    ok = ok && hit;
    detail += "actuator peak " + f(peak, 4) + " at " + f(t_peak, 5) + " s (closed form " + f(peak_cf, 4) +
              " at " + f(tp_cf, 5) + "); ";
  }

  {
    CompensatorParams p;
    const double dt = 1e-5;
    LeadCompensator lead(p, dt);
    const double w = p.peak_frequency();
    const double period = 2 * std::numbers::pi / w;
    const int n = static_cast<int>(std::round(12 * period / dt));
    double amp = 0.0;
    for (int k = 0; k < n; ++k) {
      const double y = lead.step(std::sin(w * k * dt));
      if (k * dt > 8 * period) amp = std::max(amp, std::abs(y));
    }
    const bool hit = within(amp, std::sqrt(p.lead_ratio), 0.005);
    ok = ok && hit;
    detail += "lead gain at 1/(T sqrt a) " + f(amp, 4) + " (sqrt a " + f(std::sqrt(p.lead_ratio), 4) + "); ";
  }

  {
    const LoopConfig c;
    const double dt = 0.001;
    PitchKalmanFilter kf(c.kalman, c.plant, dt);
    for (int k = 0; k < 200000; ++k) kf.step(0.0, 0.0);
    const auto k_filter = kf.gain();

    // Independent Riccati fixed point on plain arrays.
    const auto& F = kf.transition();
    const double f00 = F(0, 0), f01 = F(0, 1), f10 = F(1, 0), f11 = F(1, 1);
    const double q0 = c.kalman.q_angle * dt, q1 = c.kalman.q_rate * dt;
    const double r = c.kalman.r * c.kalman.correlation_time / dt;
    double p00 = 1, p01 = 0, p11 = 1, k0 = 0, k1 = 0;
    for (int it = 0; it < 1000000; ++it) {
      // predict
      const double a00 = f00 * p00 + f01 * p01, a01 = f00 * p01 + f01 * p11;
      const double a10 = f10 * p00 + f11 * p01, a11 = f10 * p01 + f11 * p11;
      const double m00 = a00 * f00 + a01 * f01 + q0;
      const double m01 = a00 * f10 + a01 * f11;
      const double m11 = a10 * f10 + a11 * f11 + q1;
      // update
      const double s = m00 + r;
      const double n0 = m00 / s, n1 = m01 / s;
      const double np00 = (1 - n0) * m00, np01 = (1 - n0) * m01, np11 = m11 - n1 * m01;
      const bool converged = std::abs(n0 - k0) < 1e-15 && std::abs(n1 - k1) < 1e-15;
      k0 = n0;
      k1 = n1;
      p00 = np00;
      p01 = np01;
      p11 = np11;
      if (converged && it > 10) break;
    }
    const double err = std::max(std::abs(k_filter(0) - k0), std::abs(k_filter(1) - k1));
    ok = ok && err <= 1e-6;
    detail += "Kalman gain (" + f(k_filter(0), 6) + ", " + f(k_filter(1), 6) + ") vs Riccati (" + f(k0, 6) +
              ", " + f(k1, 6) + "), max diff " + std::to_string(err);
  }
  report(9, "oracle equivalence", ok, detail);
}

void criterion_sweep() {
  SweepSpec spec;
  spec.parameter = "actuator.gain";
  for (int g = 1; g <= 15; ++g) spec.values.push_back(g);
  const auto rows = sweep(spec);
  const double winner = sweep_winner(rows).value;
  std::string costs;
  for (const auto& r : rows) costs += f(r.value, 0) + ":" + f(r.eval.cost, 2) + " ";
  report(10, "actuator gain sweep", winner >= 5 && winner <= 9,
         "winner " + f(winner, 0) + " [" + costs + "]");
}

void criterion_hygiene() {
  const LoopConfig c = quiet_loop();
  Scenario s;
  Scenario h = s;
  h.dt = s.dt / 2;
  const AbTraces full = run_ab_pair(c, s);
  const AbTraces half = run_ab_pair(c, h);
  double worst = 0.0;
  auto cmp = [&](const StepMetrics& x, const StepMetrics& y) {
    for (auto [u, v] : {std::pair{x.rise_time.value_or(NAN), y.rise_time.value_or(NAN)},
                        std::pair{x.peak_time.value_or(NAN), y.peak_time.value_or(NAN)},
                        std::pair{x.settling_time.value_or(NAN), y.settling_time.value_or(NAN)},
                        std::pair{x.peak_overshoot, y.peak_overshoot}}) {
      const double d = std::abs(u - v) / std::abs(u);
      worst = std::isnan(d) ? INFINITY : std::max(worst, d);
    }
  };
  cmp(measure(full.a), measure(half.a));
  cmp(measure(full.b), measure(half.b));

  LoopConfig noisy;
  Scenario seeded;
  seeded.seed = 42;
  std::ostringstream first, second;
  write_trace_csv(first, run_scenario(noisy, seeded));
  write_trace_csv(second, run_scenario(noisy, seeded));
  const bool identical = first.str() == second.str();
  report(11, "numerical hygiene", worst < 0.02 && identical,
         "max relative metric change on halving dt " + f(100 * worst, 3) + "%, CSV byte-identical: " +
             (identical ? "yes" : "no"));
}

}  // namespace

int main() {
  try {
    const AbTraces ab = run_ab_pair(quiet_loop(), Scenario{});
    const StepMetrics a = measure(ab.a);
    const StepMetrics b = measure(ab.b);
    criterion_reference_metrics(a, b);
    criterion_ordinal(a, b);

    Scenario seeded;
    seeded.seed = 7;
    LoopConfig noisy_loop;
    noisy_loop.disturbance.enabled = false;
    const AbTraces noisy = run_ab_pair(noisy_loop, seeded);
    const Trace disturbed = run_scenario(LoopConfig{}, seeded);
    criterion_delay_hold({&ab.a, &ab.b, &noisy.a, &noisy.b}, disturbed);
    criterion_requirements(b);
    criterion_band();
    criterion_probe();
    criterion_noise();
    criterion_sizing();
    criterion_oracles();
    criterion_sweep();
    criterion_hygiene();
  } catch (const std::exception& e) {
    std::printf("FAIL [--] unexpected exception: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
