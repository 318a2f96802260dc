#pragma once

// Parameter sweeps and PID gain tuning against a step-response cost.

#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "pitchap/errors.hpp"
#include "pitchap/loop_fields.hpp"
#include "pitchap/metrics.hpp"
#include "pitchap/nelder_mead.hpp"
#include "pitchap/sim_engine.hpp"

namespace pitchap {

struct CostSpec {
  double settling_weight = 1.0;
  double overshoot_weight = 0.5;
  double rise_weight = 0.2;
  double iae_weight = 0.01;
  double divergence_penalty = 1e6;
  double band_fraction = 0.05;

  bool all_zero() const {
    return settling_weight == 0.0 && overshoot_weight == 0.0 && rise_weight == 0.0 &&
           iae_weight == 0.0;
  }

  void validate() const {
    for (double w : {settling_weight, overshoot_weight, rise_weight, iae_weight})
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weights must be non-negative", "cost");
    if (all_zero()) throw ConfigError("at least one weight must be positive", "cost");
    if (!(divergence_penalty > 0.0) || !std::isfinite(divergence_penalty))
      throw ConfigError("must be positive and finite", "cost.divergence_penalty");
    if (!(band_fraction > 0.0)) throw ConfigError("must be positive", "cost.band_fraction");
  }
};

struct Evaluation {
  std::optional<StepMetrics> metrics;  // absent when the run diverged or never responded
  double cost = 0.0;
  bool diverged = false;
};

/// Runs one noise-free scenario and scores it. A missing settling or rise
/// time is charged the full scenario duration; divergence and no-response
/// are charged the divergence penalty.
inline Evaluation evaluate(LoopConfig config, const Scenario& scenario, const CostSpec& cost) {
  config.noise.enabled = false;
  Evaluation ev;
  try {
    const Trace tr = run_scenario(config, scenario);
    const BandSpec band =
        band_for_step(scenario.initial_pitch, scenario.commanded_pitch, cost.band_fraction);
    const StepMetrics m =
        step_metrics(tr, scenario.initial_pitch, scenario.commanded_pitch, band);
    ev.metrics = m;
    ev.cost = cost.settling_weight * m.settling_time.value_or(scenario.duration) +
              cost.overshoot_weight * m.peak_overshoot +
              cost.rise_weight * m.rise_time.value_or(scenario.duration) +
              cost.iae_weight * integral_abs_error(tr, scenario.commanded_pitch);
  } catch (const DivergedRunError&) {
    ev.diverged = true;
    ev.cost = cost.divergence_penalty;
  } catch (const NoResponseError&) {
    ev.cost = cost.divergence_penalty;
  }
  return ev;
}

struct SweepSpec {
  std::string parameter = "actuator.gain";
  std::vector<double> values;
  Scenario scenario;
  LoopConfig base;
  CostSpec cost;

  void validate() const {
    if (values.empty()) throw ConfigError("sweep needs at least one value", "sweep.values");
    LoopConfig probe = base;
    if (find_loop_number(probe, parameter) == nullptr)
      throw ConfigError("not a numeric loop parameter", parameter);
    cost.validate();
  }
};

struct SweepRow {
  double value = 0.0;
  Evaluation eval;
};

/// One noise-free run per value, evaluated concurrently, rows in input order.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(spec.values.size());
  for (double v : spec.values) {
    jobs.push_back(std::async(std::launch::async, [&spec, v] {
      return SweepRow{v, evaluate(with_loop_number(spec.base, spec.parameter, v), spec.scenario,
                                  spec.cost)};
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

/// Row with the lowest cost; ties go to the earliest row.
inline const SweepRow& sweep_winner(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw DomainError("empty sweep table");
  const SweepRow* best = &rows.front();
  for (const auto& r : rows)
    if (r.eval.cost < best->eval.cost) best = &r;
  return *best;
}

struct TuneResult {
  PidGains gains;
  double cost = 0.0;
  double start_cost = 0.0;
  std::vector<double> history;  // best-so-far, non-increasing
  std::size_t evals = 0;
};

/// Nelder-Mead over (kp, ki, kd) from the configured gains.
inline TuneResult tune_pid(const LoopConfig& config, const Scenario& scenario,
                           const CostSpec& cost, std::size_t max_evals) {
  if (max_evals < 1) throw ConfigError("must be at least 1", "tune.max_evals");
  TuneResult out;
  out.gains = config.pid;
  if (cost.all_zero()) {
    out.history = {0.0};
    out.evals = 0;
    return out;
  }
  cost.validate();

  auto objective = [&](const std::array<double, 3>& x) {
    LoopConfig c = config;
    c.pid.kp = x[0];
    c.pid.ki = x[1];
    c.pid.kd = x[2];
    try {
      c.pid.validate();
    } catch (const ConfigError&) {
      return cost.divergence_penalty;
    }
    return evaluate(c, scenario, cost).cost;
  };

  const std::array<double, 3> start{config.pid.kp, config.pid.ki, config.pid.kd};
  NelderMeadOptions opt;
  opt.max_evals = max_evals;

  // Probe the whole initial simplex before committing to the search.
  if (max_evals > 1) {
    bool any_finite = false;
    for (std::size_t i = 0; i <= start.size(); ++i) {
      std::array<double, 3> p = start;
      if (i > 0) p[i - 1] += p[i - 1] != 0.0 ? opt.relative_step * std::abs(p[i - 1]) : opt.min_step;
      if (objective(p) < cost.divergence_penalty) {
        any_finite = true;
        break;
      }
    }
    if (!any_finite) throw UntunableStartError("every point of the initial simplex diverges");
  }

  const auto res = nelder_mead<3>(objective, start, opt);
  out.gains.kp = res.x[0];
  out.gains.ki = res.x[1];
  out.gains.kd = res.x[2];
  out.cost = res.value;
  out.start_cost = res.history.front();
  out.history = res.history;
  out.evals = res.evals;
  return out;
}

}  // namespace pitchap
