// Command-line front end: simulate, ab, size, sweep, tune, metrics.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 diverged run,
// 4 any other failure (I/O, no response).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pitchap/pitchap.hpp"

namespace fs = std::filesystem;
using namespace pitchap;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitFailure = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool no_noise = false;
  std::optional<double> duration;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "noise seed (overrides the configuration)");
  cmd->add_option("--set", o.overrides, "dotted-path override key=value (repeatable)");
  cmd->add_flag("--no-noise", o.no_noise, "disable measurement noise");
  cmd->add_option("--duration", o.duration, "scenario duration in seconds");
  cmd->add_option("--dt", o.dt, "integration step in seconds");
}

ProjectConfig resolve(const CommonOptions& o) {
  ProjectConfig cfg = o.config_path.empty() ? parse_config("{}") : load_config(o.config_path);
  for (const auto& s : o.overrides) apply_override(cfg, s);
  if (o.no_noise) cfg.loop.noise.enabled = false;
  if (o.seed) cfg.scenario.seed = *o.seed;
  if (o.duration) cfg.scenario.duration = *o.duration;
  if (o.dt) cfg.scenario.dt = *o.dt;
  cfg.validate();
  return cfg;
}

fs::path out_file(const CommonOptions& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_trace(const fs::path& path, const Trace& tr) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(f, tr);
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

std::string opt_ms(const std::optional<double>& v) {
  return v ? fmt(*v * 1000.0, 1) + " ms" : std::string("n/a");
}

std::string metrics_text(const StepMetrics& m, const BandSpec& band) {
  std::ostringstream os;
  os << "rise time t_r (0-100%): " << opt_ms(m.rise_time) << "\n"
     << "rise time (10-90%):     " << opt_ms(m.rise_time_10_90) << "\n"
     << "peak time t_p:          " << opt_ms(m.peak_time) << "\n"
     << "settling time t_s:      " << opt_ms(m.settling_time) << " (band +/-" << fmt(band.half_width, 3)
     << " deg)\n"
     << "peak overshoot M_p:     " << fmt(m.peak_overshoot) << " deg\n"
     << "percent overshoot %M_p: "
     << (m.percent_overshoot ? fmt(*m.percent_overshoot, 1) + " %" : std::string("n/a"))
     << " (of step: " << fmt(m.percent_overshoot_of_step, 1) << " %)\n"
     << "steady-state error:     " << fmt(m.steady_error * 100.0, 2) << " % of step\n"
     << requirements_report(m);
  return os.str();
}

std::string metrics_csv(const StepMetrics& m) {
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::ostringstream os;
  os << "rise_time,rise_time_10_90,peak_time,settling_time,peak_overshoot,percent_overshoot,"
        "percent_overshoot_of_step,steady_error,verdict_1,verdict_2,verdict_3\n"
     << cell(m.rise_time) << ',' << cell(m.rise_time_10_90) << ',' << cell(m.peak_time) << ','
     << cell(m.settling_time) << ',' << format_number(m.peak_overshoot) << ','
     << cell(m.percent_overshoot) << ',' << format_number(m.percent_overshoot_of_step) << ','
     << format_number(m.steady_error) << ',' << (m.meets_rise ? "pass" : "fail") << ','
     << (m.meets_overshoot ? "pass" : "fail") << ',' << (m.meets_accuracy ? "pass" : "fail")
     << '\n';
  return os.str();
}

std::string noise_text(const NoiseEnvelope& e) {
  return "noise envelope (5 s to end): max " + fmt(e.max) + " deg, min " + fmt(e.min) +
         " deg, variance " + fmt(e.variance, 6) + " deg^2\n";
}

// Matplotlib script overlaying the pitch traces and the settling band.
std::string plot_script(const std::vector<std::pair<std::string, std::string>>& traces,
                        const BandSpec& band, const std::string& png) {
  std::ostringstream os;
  os << "import csv\nimport matplotlib\nmatplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\nfrom pathlib import Path\n\n"
        "here = Path(__file__).resolve().parent\n\n\n"
        "def load(name):\n"
        "    with open(here / name, newline=\"\") as f:\n"
        "        rows = list(csv.DictReader(f))\n"
        "    return {k: [float(r[k]) for r in rows] for k in rows[0]}\n\n\n"
        "fig, ax = plt.subplots(figsize=(9, 5))\n";
  for (const auto& [label, file] : traces) {
    os << "d = load(\"" << file << "\")\n"
       << "ax.plot(d[\"t\"], d[\"omega_meas\"], lw=0.5, alpha=0.4, label=\"Measured Pitch Angle '"
       << label << "'\")\n"
       << "ax.plot(d[\"t\"], d[\"omega\"], lw=1.5, label=\"Pitch Angle '" << label << "'\")\n";
  }
  os << "ax.axhline(" << format_number(band.target + band.half_width)
     << ", color=\"k\", ls=\"--\", lw=0.8, label=\"Upper 1\")\n"
     << "ax.axhline(" << format_number(band.target - band.half_width)
     << ", color=\"k\", ls=\":\", lw=0.8, label=\"Lower 2\")\n"
     << "ax.set_xlabel(\"time (s)\")\nax.set_ylabel(\"pitch (deg)\")\n"
        "ax.grid(True, alpha=0.3)\nax.legend()\n"
        "fig.tight_layout()\nfig.savefig(here / \""
     << png << "\", dpi=150)\n";
  return os.str();
}

BandSpec scenario_band(const Scenario& s) {
  return band_for_step(s.initial_pitch, s.commanded_pitch, 0.05);
}

StepMetrics scenario_metrics(const Trace& tr, const Scenario& s) {
  return step_metrics(tr, s.initial_pitch, s.commanded_pitch, scenario_band(s));
}

int cmd_simulate(const CommonOptions& o) {
  const ProjectConfig cfg = resolve(o);
  const Trace tr = run_scenario(cfg.loop, cfg.scenario);
  const BandSpec band = scenario_band(cfg.scenario);
  write_trace(out_file(o, "trace.csv"), tr);
  write_text(out_file(o, "plot_trace.py"), plot_script({{"B", "trace.csv"}}, band, "trace.png"));

  std::string text;
  try {
    const StepMetrics m = scenario_metrics(tr, cfg.scenario);
    text = metrics_text(m, band);
    write_text(out_file(o, "metrics.csv"), metrics_csv(m));
  } catch (const NoResponseError& e) {
    // Short runs can end inside the actuator delay; the trace is still useful.
    text = std::string("no step metrics: ") + e.what() + "\n";
  }
  if (cfg.loop.noise.enabled && cfg.scenario.duration > 5.0) text += noise_text(noise_envelope(tr, 5.0));
  write_text(out_file(o, "metrics.txt"), text);
  std::cout << text;
  return 0;
}

std::string improvement(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b || *a == 0.0) return "n/a";
  return fmt(100.0 * (*a - *b) / *a, 1) + " %";
}

int cmd_ab(const CommonOptions& o) {
  const ProjectConfig cfg = resolve(o);
  const AbTraces ab = run_ab_pair(cfg.loop, cfg.scenario);
  const BandSpec band = scenario_band(cfg.scenario);
  const StepMetrics ma = scenario_metrics(ab.a, cfg.scenario);
  const StepMetrics mb = scenario_metrics(ab.b, cfg.scenario);

  std::ostringstream os;
  os << "== A: without compensator ==\n" << metrics_text(ma, band);
  os << "\n== B: with compensator ==\n" << metrics_text(mb, band);
  os << "\n== improvement of B over A ==\n"
     << "rise time:      " << improvement(ma.rise_time, mb.rise_time) << "\n"
     << "peak time:      " << improvement(ma.peak_time, mb.peak_time) << "\n"
     << "settling time:  " << improvement(ma.settling_time, mb.settling_time) << "\n"
     << "peak overshoot: " << improvement(ma.peak_overshoot, mb.peak_overshoot) << "\n";
  if (cfg.loop.noise.enabled && cfg.scenario.duration > 5.0) {
    const NoiseEnvelope ea = noise_envelope(ab.a, 5.0);
    const NoiseEnvelope eb = noise_envelope(ab.b, 5.0);
    os << "\n== noise ==\nA " << noise_text(ea) << "B " << noise_text(eb)
       << "peak-to-peak A " << fmt(ea.peak_to_peak()) << " deg, B " << fmt(eb.peak_to_peak())
       << " deg (" << (eb.peak_to_peak() > ea.peak_to_peak() ? "B > A" : "B <= A") << ")\n";
  }
  write_trace(out_file(o, "trace_a.csv"), ab.a);
  write_trace(out_file(o, "trace_b.csv"), ab.b);
  write_text(out_file(o, "ab_report.txt"), os.str());
  write_text(out_file(o, "plot_ab.py"),
             plot_script({{"A", "trace_a.csv"}, {"B", "trace_b.csv"}}, band, "ab.png"));
  std::cout << os.str();
  return 0;
}

int cmd_size(const CommonOptions& o) {
  const ProjectConfig cfg = resolve(o);
  const SizingReport r = size_configuration(cfg.missile, cfg.derivatives, cfg.tail_sizing);
  std::ostringstream os;
  os << "wing area S_W:           " << fmt(r.wing_area) << " m^2 (span " << fmt(cfg.missile.wingspan, 3)
     << " m, AR " << fmt(cfg.missile.aspect_ratio, 2) << ")\n"
     << "tail area ratio S_T/S:   " << fmt(r.tail_ratio) << "\n"
     << "tail area S_T:           " << fmt(r.tail_area) << " m^2\n"
     << "static margin:           " << fmt(r.static_margin * 100.0, 2) << " % of length ("
     << fmt(r.static_margin_calibers, 2) << " calibers), "
     << (r.statically_stable ? "stable" : "unstable")
     << (r.margin_in_window ? ", inside" : ", outside") << " the 5-15 % window\n"
     << "control margin:          " << (r.control_margin ? "pass" : "fail") << " (C_Ma "
     << fmt(cfg.derivatives.moment_alpha, 3) << " < C_Md " << fmt(cfg.derivatives.moment_delta, 3)
     << ")\n";
  if (!o.out_dir.empty() && o.out_dir != ".") write_text(out_file(o, "sizing.txt"), os.str());
  std::cout << os.str();
  return 0;
}

double parse_number(const std::string& tok, const char* option) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ConfigError("not a number: '" + tok + "'", option);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string tok; std::getline(is, tok, sep);) out.push_back(tok);
  return out;
}

// Values from --range start:stop[:step] followed by --values a,b,c.
std::vector<double> parse_values(const std::string& list, const std::string& range) {
  std::vector<double> out;
  if (!range.empty()) {
    const auto parts = split(range, ':');
    if (parts.size() < 2 || parts.size() > 3)
      throw ConfigError("range must look like start:stop[:step]", "--range");
    const double a = parse_number(parts[0], "--range");
    const double b = parse_number(parts[1], "--range");
    const double step = parts.size() == 3 ? parse_number(parts[2], "--range") : 1.0;
    if (!(step > 0.0) || b < a) throw ConfigError("range needs start <= stop and step > 0", "--range");
    for (long i = 0;; ++i) {
      const double v = a + static_cast<double>(i) * step;
      if (v > b + 1e-9 * std::max(1.0, std::abs(b))) break;
      out.push_back(v);
    }
  }
  for (const auto& tok : split(list, ','))
    if (!tok.empty()) out.push_back(parse_number(tok, "--values"));
  if (out.empty()) throw ConfigError("sweep needs at least one value", "--values");
  return out;
}

std::string cost_cell(const Evaluation& e) { return format_number(e.cost); }

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::string& values,
              const std::string& range) {
  const ProjectConfig cfg = resolve(o);
  SweepSpec spec;
  spec.parameter = param;
  spec.values = parse_values(values, range);
  spec.scenario = cfg.scenario;
  spec.base = cfg.loop;
  const auto rows = sweep(spec);

  std::ostringstream csv;
  csv << "value,cost,diverged,rise_time,peak_time,settling_time,peak_overshoot\n";
  for (const auto& r : rows) {
    auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    csv << format_number(r.value) << ',' << cost_cell(r.eval) << ',' << (r.eval.diverged ? 1 : 0);
    if (r.eval.metrics) {
      const auto& m = *r.eval.metrics;
      csv << ',' << cell(m.rise_time) << ',' << cell(m.peak_time) << ',' << cell(m.settling_time)
          << ',' << format_number(m.peak_overshoot);
    } else {
      csv << ",,,,";
    }
    csv << '\n';
  }
  write_text(out_file(o, "sweep.csv"), csv.str());
  const SweepRow& best = sweep_winner(rows);
  std::cout << csv.str() << "winner: " << param << " = " << format_number(best.value)
            << " (cost " << fmt(best.eval.cost) << ")\n";
  return 0;
}

int cmd_tune(const CommonOptions& o, std::size_t max_evals) {
  const ProjectConfig cfg = resolve(o);
  const TuneResult r = tune_pid(cfg.loop, cfg.scenario, CostSpec{}, max_evals);
  std::ostringstream hist;
  hist << "eval,best_cost\n";
  for (std::size_t i = 0; i < r.history.size(); ++i)
    hist << i + 1 << ',' << format_number(r.history[i]) << '\n';
  std::ostringstream os;
  os << "start gains: kp " << format_number(cfg.loop.pid.kp) << ", ki " << format_number(cfg.loop.pid.ki)
     << ", kd " << format_number(cfg.loop.pid.kd) << " (cost " << fmt(r.start_cost) << ")\n"
     << "tuned gains: kp " << format_number(r.gains.kp) << ", ki " << format_number(r.gains.ki)
     << ", kd " << format_number(r.gains.kd) << " (cost " << fmt(r.cost) << ")\n"
     << "evaluations: " << r.evals << "\n";
  write_text(out_file(o, "tune_history.csv"), hist.str());
  write_text(out_file(o, "tune_report.txt"), os.str());
  std::cout << os.str();
  return 0;
}

int cmd_metrics(const CommonOptions& o, const std::string& trace_path, double fraction) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file", trace_path);
  const Trace tr = read_trace_csv(in);
  if (tr.empty()) throw ConfigError("trace has no rows", trace_path);
  const double start = tr.omega.front();
  const double target = tr.cmd.front();
  const BandSpec band = band_for_step(start, target, fraction);
  const StepMetrics m = step_metrics(tr, start, target, band);
  std::string text = metrics_text(m, band);
  if (tr.t.back() > 5.0) text += noise_text(noise_envelope(tr, 5.0));
  write_text(out_file(o, "metrics.txt"), text);
  write_text(out_file(o, "metrics.csv"), metrics_csv(m));
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pitch autopilot simulation and analysis"};
  app.require_subcommand(1);

  CommonOptions simulate_o, ab_o, size_o, sweep_o, tune_o, metrics_o;
  auto* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
  add_common(simulate, simulate_o);
  auto* ab = app.add_subcommand("ab", "run without (A) and with (B) the lead compensator");
  add_common(ab, ab_o);
  auto* size = app.add_subcommand("size", "wing, tail and margin sizing report");
  add_common(size, size_o);

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one loop parameter");
  add_common(sweep_cmd, sweep_o);
  std::string sweep_param = "actuator.gain";
  std::string sweep_values;
  std::string sweep_range;
  sweep_cmd->add_option("--param", sweep_param, "dotted loop parameter");
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values");
  sweep_cmd->add_option("--range", sweep_range, "start:stop[:step]");

  auto* tune = app.add_subcommand("tune", "Nelder-Mead PID gain tuning");
  add_common(tune, tune_o);
  std::size_t max_evals = 150;
  tune->add_option("--max-evals", max_evals, "evaluation budget")->check(CLI::PositiveNumber);

  auto* metrics = app.add_subcommand("metrics", "recompute metrics from a trace CSV");
  add_common(metrics, metrics_o);
  std::string trace_path;
  double band_fraction = 0.05;
  metrics->add_option("--trace", trace_path, "trace CSV")->required();
  metrics->add_option("--band", band_fraction, "settling band as a fraction of the step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(simulate_o);
    if (*ab) return cmd_ab(ab_o);
    if (*size) return cmd_size(size_o);
    if (*sweep_cmd) return cmd_sweep(sweep_o, sweep_param, sweep_values, sweep_range);
    if (*tune) return cmd_tune(tune_o, max_evals);
    if (*metrics) return cmd_metrics(metrics_o, trace_path, band_fraction);
  } catch (const DivergedRunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularConfigurationError& e) {
    std::cerr << "error: " << e.what() << " [term: " << e.term() << "]\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
