#pragma once

// Step-response measurements on the true pitch signal of a trace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include "pitchap/errors.hpp"
#include "pitchap/sim_engine.hpp"

namespace pitchap {

/// Target value with a symmetric tolerance band.
struct BandSpec {
  double target = 0.0;
  double half_width = 0.0;

  bool contains(double v) const { return std::abs(v - target) <= half_width; }
};

/// Band of half-width fraction * |start - target| around the target.
inline BandSpec band_for_step(double start, double target, double fraction) {
  if (!(fraction > 0.0)) throw DomainError("band fraction must be positive");
  if (start == target) throw DomainError("degenerate step: start equals target");
  return {target, fraction * std::abs(start - target)};
}

/// Performance requirements for a tail-controlled autopilot step response.
struct Requirements {
  double max_rise_time = 0.350;        // s
  double max_percent_overshoot = 20.0; // %
  double max_steady_error = 0.05;      // fraction of the step
};

struct StepMetrics {
  // Time from the start of the trace until the response first reaches the
  // target (0-100% rise, the usual convention for underdamped responses).
  std::optional<double> rise_time;
  // 10%-90% traversal of the step.
  std::optional<double> rise_time_10_90;
  std::optional<double> peak_time;      // absent when the target is never exceeded
  std::optional<double> settling_time;  // absent when the trace ends outside the band
  double peak_overshoot = 0.0;          // deg beyond target, >= 0
  std::optional<double> percent_overshoot;  // 100 * M_p / |target|
  double percent_overshoot_of_step = 0.0;   // 100 * M_p / |target - start|
  double steady_error = 0.0;                // |final - target| / |target - start|

  bool meets_rise = false;
  bool meets_overshoot = false;
  bool meets_accuracy = false;
};

/// Extracts rise, peak and settling measurements from `trace.omega`.
/// Times are relative to the first sample.
inline StepMetrics step_metrics(std::span<const double> time, std::span<const double> signal,
                                double start, double target, const BandSpec& band,
                                const Requirements& req = {}) {
  if (time.empty() || time.size() != signal.size())
    throw DomainError("trace must be non-empty with matching columns");
  if (start == target) throw DomainError("degenerate step: start equals target");

  const double step = target - start;
  const double dir = step > 0.0 ? 1.0 : -1.0;
  const double t0 = time.front();
  auto progress = [&](double v) { return (v - start) / step; };

  StepMetrics m;
  std::optional<std::size_t> i10, i90, i100;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double p = progress(signal[i]);
    if (!i10 && p >= 0.1) i10 = i;
    if (!i90 && p >= 0.9) i90 = i;
    if (!i100 && p >= 1.0) {
      i100 = i;
      break;
    }
  }
  if (!i10) throw NoResponseError("response never reaches 10% of the commanded step");
  if (i90) m.rise_time_10_90 = time[*i90] - time[*i10];
  if (i100) m.rise_time = time[*i100] - t0;

  double best = 0.0;
  std::optional<std::size_t> ipeak;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double beyond = dir * (signal[i] - target);
    if (beyond > best) {
      best = beyond;
      ipeak = i;
    }
  }
  m.peak_overshoot = best;
  if (ipeak) m.peak_time = time[*ipeak] - t0;
  if (target != 0.0) m.percent_overshoot = 100.0 * best / std::abs(target);
  m.percent_overshoot_of_step = 100.0 * best / std::abs(step);

  // Settled from the sample after the last excursion outside the band.
  std::optional<std::size_t> last_out;
  for (std::size_t i = signal.size(); i-- > 0;) {
    if (!band.contains(signal[i])) {
      last_out = i;
      break;
    }
  }
  if (!last_out) {
    m.settling_time = 0.0;
  } else if (*last_out + 1 < signal.size()) {
    m.settling_time = time[*last_out + 1] - t0;
  }

  m.steady_error = std::abs(signal.back() - target) / std::abs(step);
  m.meets_rise = m.rise_time && *m.rise_time <= req.max_rise_time;
  m.meets_overshoot = m.percent_overshoot.value_or(m.percent_overshoot_of_step) <=
                      req.max_percent_overshoot;
  m.meets_accuracy = m.steady_error <= req.max_steady_error;
  return m;
}

inline StepMetrics step_metrics(const Trace& trace, double start, double target,
                                const BandSpec& band, const Requirements& req = {}) {
  return step_metrics(trace.t, trace.omega, start, target, band, req);
}

namespace detail {
inline std::string ms(const std::optional<double>& t) {
  if (!t) return "n/a";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(0);
  os << *t * 1000.0 << " ms";
  return os.str();
}
}  // namespace detail

/// Three-line pass/fail rendering of the autopilot requirements.
inline std::string requirements_report(const StepMetrics& m, const Requirements& req = {}) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  os.precision(0);
  os << "(1) rise time t_r <= " << req.max_rise_time * 1000.0 << " ms: " << verdict(m.meets_rise)
     << " (t_r = " << detail::ms(m.rise_time) << ")\n";
  os.precision(1);
  const double pct = m.percent_overshoot.value_or(m.percent_overshoot_of_step);
  os << "(2) overshoot %M_p <= " << req.max_percent_overshoot << "%: "
     << verdict(m.meets_overshoot) << " (%M_p = " << pct << "%)\n";
  os << "(3) steady-state accuracy <= " << req.max_steady_error * 100.0
     << "%: " << verdict(m.meets_accuracy) << " (error = " << m.steady_error * 100.0 << "%)\n";
  return os.str();
}

/// Which error signal the noise statistics are taken over.
enum class ErrorSignal {
  kFeedback,  // cmd - filtered pitch, the signal the PID acts on
  kTrue,      // cmd - true pitch
};

struct NoiseEnvelope {
  double max = 0.0;
  double min = 0.0;
  double variance = 0.0;

  double peak_to_peak() const { return max - min; }
};

/// Extrema and variance of the error over [window_start, end].
inline NoiseEnvelope noise_envelope(const Trace& trace, double window_start,
                                    ErrorSignal which = ErrorSignal::kFeedback) {
  if (trace.empty() || !(window_start < trace.t.back()))
    throw DomainError("window start must precede the end of the trace");
  const auto first = std::lower_bound(trace.t.begin(), trace.t.end(), window_start - 1e-12);
  const std::size_t i0 = static_cast<std::size_t>(first - trace.t.begin());
  auto err = [&](std::size_t i) {
    return which == ErrorSignal::kFeedback ? trace.error[i] : trace.cmd[i] - trace.omega[i];
  };
  NoiseEnvelope env{err(i0), err(i0), 0.0};
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = i0; i < trace.size(); ++i) {
    const double e = err(i);
    env.max = std::max(env.max, e);
    env.min = std::min(env.min, e);
    ++count;
    const double d = e - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (e - mean);
  }
  env.variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  return env;
}

/// Integral of |omega - target| over the trace (trapezoidal).
inline double integral_abs_error(const Trace& trace, double target) {
  double acc = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double a = std::abs(trace.omega[i - 1] - target);
    const double b = std::abs(trace.omega[i] - target);
    acc += 0.5 * (a + b) * (trace.t[i] - trace.t[i - 1]);
  }
  return acc;
}

}  // namespace pitchap
