#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pitchap/metrics.hpp"

using namespace pitchap;

namespace {

struct Series {
  std::vector<double> t;
  std::vector<double> y;
};

// Unit step response of wn^2 / (s^2 + 2 z wn s + wn^2), scaled onto start -> target.
Series second_order(double start, double target, double z, double wn, double dt, double span,
                    double t0 = 0.0) {
  Series s;
  const double wd = wn * std::sqrt(1.0 - z * z);
  const double phi = std::acos(z);
  for (double t = 0.0; t <= span; t += dt) {
    const double unit = 1.0 - std::exp(-z * wn * t) / std::sqrt(1.0 - z * z) * std::sin(wd * t + phi);
    s.t.push_back(t0 + t);
    s.y.push_back(start + (target - start) * unit);
  }
  return s;
}

StepMetrics measure(const Series& s, double start, double target, double fraction = 0.05) {
  return step_metrics(s.t, s.y, start, target, band_for_step(start, target, fraction));
}

}  // namespace

TEST(Band, HalfWidthIsFractionOfStep) {
  EXPECT_EQ(band_for_step(10.0, 1.0, 0.05).half_width, 0.45);
  EXPECT_DOUBLE_EQ(band_for_step(0.0, -4.0, 0.1).half_width, 0.4);
  const BandSpec b = band_for_step(10.0, 1.0, 0.05);
  EXPECT_TRUE(b.contains(1.45));
  EXPECT_TRUE(b.contains(0.55));
  EXPECT_FALSE(b.contains(1.46));
}

TEST(Band, RejectsDegenerateInputs) {
  EXPECT_THROW(band_for_step(1.0, 1.0, 0.05), DomainError);
  EXPECT_THROW(band_for_step(0.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(band_for_step(0.0, 1.0, -0.1), DomainError);
}

TEST(StepMetrics, AnalyticSecondOrder) {
  const double z = 0.5, wn = 50.0;
  const Series s = second_order(0.0, 1.0, z, wn, 1e-6, 0.3);
  const StepMetrics m = measure(s, 0.0, 1.0);
  const double wd = wn * std::sqrt(1.0 - z * z);
  EXPECT_NEAR(*m.percent_overshoot, 16.30, 0.01);
  EXPECT_NEAR(*m.peak_time, std::numbers::pi / wd, 1e-5);
  EXPECT_NEAR(*m.peak_time, 0.07255, 1e-5);
  EXPECT_NEAR(*m.rise_time, (std::numbers::pi - std::acos(z)) / wd, 1e-5);
}

TEST(StepMetrics, SettlingTimeMatchesLastBandExit) {
  const Series s = second_order(0.0, 1.0, 0.5, 50.0, 1e-5, 0.5);
  const StepMetrics m = measure(s, 0.0, 1.0);
  ASSERT_TRUE(m.settling_time);
  // Envelope estimate 4/(z*wn) for a 2% band is the wrong band; check the definition instead.
  std::size_t k = 0;
  while (s.t[k] < *m.settling_time - 1e-12) ++k;
  for (std::size_t i = k; i < s.y.size(); ++i) ASSERT_LE(std::abs(s.y[i] - 1.0), 0.05);
  EXPECT_GT(std::abs(s.y[k - 1] - 1.0), 0.05);
}

TEST(StepMetrics, InvariantUnderTimeShift) {
  const StepMetrics a = measure(second_order(10.0, 1.0, 0.4, 20.0, 1e-4, 2.0), 10.0, 1.0);
  const StepMetrics b = measure(second_order(10.0, 1.0, 0.4, 20.0, 1e-4, 2.0, 5.0), 10.0, 1.0);
  EXPECT_NEAR(*a.rise_time, *b.rise_time, 1e-9);
  EXPECT_NEAR(*a.peak_time, *b.peak_time, 1e-9);
  EXPECT_NEAR(*a.settling_time, *b.settling_time, 1e-9);
  EXPECT_DOUBLE_EQ(a.peak_overshoot, b.peak_overshoot);
}

TEST(StepMetrics, ScalesWithStepSize) {
  const StepMetrics a = measure(second_order(0.0, 1.0, 0.4, 20.0, 1e-4, 2.0), 0.0, 1.0);
  const StepMetrics b = measure(second_order(0.0, 3.0, 0.4, 20.0, 1e-4, 2.0), 0.0, 3.0);
  EXPECT_NEAR(b.peak_overshoot, 3.0 * a.peak_overshoot, 1e-12);
  EXPECT_NEAR(b.percent_overshoot_of_step, a.percent_overshoot_of_step, 1e-9);
  EXPECT_NEAR(*b.rise_time, *a.rise_time, 1e-9);
  EXPECT_NEAR(*b.settling_time, *a.settling_time, 1e-9);
}

TEST(StepMetrics, DownwardStep) {
  const StepMetrics m = measure(second_order(10.0, 1.0, 0.5, 50.0, 1e-6, 0.3), 10.0, 1.0);
  EXPECT_NEAR(m.peak_overshoot, 9.0 * 0.1630, 1e-3);
  EXPECT_NEAR(*m.percent_overshoot, 100.0 * m.peak_overshoot / 1.0, 1e-12);
  EXPECT_NEAR(m.percent_overshoot_of_step, 16.30, 0.01);
}

TEST(StepMetrics, OverdampedHasNoPeak) {
  Series s;
  for (int k = 0; k <= 5000; ++k) {
    s.t.push_back(k * 1e-3);
    s.y.push_back(1.0 - std::exp(-k * 1e-3));
  }
  const StepMetrics m = measure(s, 0.0, 1.0);
  EXPECT_FALSE(m.peak_time);
  EXPECT_FALSE(m.rise_time);
  EXPECT_TRUE(m.rise_time_10_90);
  EXPECT_NEAR(*m.rise_time_10_90, std::log(9.0), 2e-3);
  EXPECT_EQ(m.peak_overshoot, 0.0);
}

TEST(StepMetrics, NoResponseThrows) {
  const std::vector<double> t{0.0, 0.1, 0.2};
  const std::vector<double> y{10.0, 10.0, 9.5};
  EXPECT_THROW(step_metrics(t, y, 10.0, 1.0, band_for_step(10.0, 1.0, 0.05)), NoResponseError);
}

TEST(StepMetrics, SettlingEdgeCases) {
  const BandSpec band = band_for_step(0.0, 1.0, 0.05);
  const std::vector<double> t{0.0, 1.0, 2.0};
  EXPECT_EQ(*step_metrics(t, std::vector<double>{0.98, 1.0, 1.0}, 0.0, 1.0, band).settling_time, 0.0);
  EXPECT_FALSE(step_metrics(t, std::vector<double>{0.5, 1.0, 1.2}, 0.0, 1.0, band).settling_time);
  EXPECT_EQ(*step_metrics(t, std::vector<double>{0.5, 1.0, 1.0}, 0.0, 1.0, band).settling_time, 1.0);
}

TEST(StepMetrics, RejectsMalformedInput) {
  const BandSpec band = band_for_step(0.0, 1.0, 0.05);
  EXPECT_THROW(step_metrics(std::vector<double>{}, std::vector<double>{}, 0.0, 1.0, band), DomainError);
  EXPECT_THROW(step_metrics(std::vector<double>{0.0}, std::vector<double>{0.0, 1.0}, 0.0, 1.0, band),
               DomainError);
}

TEST(Requirements, Verdicts) {
  StepMetrics m;
  m.rise_time = 0.25;
  m.percent_overshoot = 364.0;
  m.steady_error = 0.001;
  const std::vector<double> t{0.0, 0.25, 0.43, 1.0};
  const std::vector<double> y{10.0, 1.0, -2.64, 1.0};
  const StepMetrics b = step_metrics(t, y, 10.0, 1.0, band_for_step(10.0, 1.0, 0.05));
  EXPECT_TRUE(b.meets_rise);
  EXPECT_FALSE(b.meets_overshoot);
  EXPECT_TRUE(b.meets_accuracy);
  EXPECT_NEAR(*b.percent_overshoot, 364.0, 1e-9);

  const std::string text = requirements_report(b);
  EXPECT_NE(text.find("(1) rise time t_r <= 350 ms: PASS"), std::string::npos);
  EXPECT_NE(text.find("(2) overshoot %M_p <= 20.0%: FAIL"), std::string::npos);
  EXPECT_NE(text.find("(3) steady-state accuracy <= 5.0%: PASS"), std::string::npos);
}

TEST(Requirements, SlowRiseFails) {
  const std::vector<double> t{0.0, 0.2, 0.4, 1.0};
  const std::vector<double> y{0.0, 0.5, 1.0, 1.0};
  const StepMetrics m = step_metrics(t, y, 0.0, 1.0, band_for_step(0.0, 1.0, 0.05));
  EXPECT_FALSE(m.meets_rise);
  EXPECT_TRUE(m.meets_overshoot);
  EXPECT_TRUE(m.meets_accuracy);
}

namespace {

Trace error_trace(const std::vector<double>& errors) {
  Trace tr;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    tr.t.push_back(0.5 * static_cast<double>(i));
    tr.cmd.push_back(1.0);
    tr.error.push_back(errors[i]);
    tr.omega.push_back(1.0 - 2.0 * errors[i]);
  }
  return tr;
}

}  // namespace

TEST(NoiseEnvelope, WindowedExtremaAndVariance) {
  const Trace tr = error_trace({9.0, -9.0, 1.0, -1.0, 3.0, 1.0});
  const NoiseEnvelope env = noise_envelope(tr, 1.0);
  EXPECT_EQ(env.max, 3.0);
  EXPECT_EQ(env.min, -1.0);
  EXPECT_DOUBLE_EQ(env.peak_to_peak(), 4.0);
  EXPECT_NEAR(env.variance, 8.0 / 3.0, 1e-12);

  const NoiseEnvelope truth = noise_envelope(tr, 1.0, ErrorSignal::kTrue);
  EXPECT_EQ(truth.max, 6.0);
  EXPECT_EQ(truth.min, -2.0);
}

TEST(NoiseEnvelope, RejectsWindowPastEnd) {
  const Trace tr = error_trace({1.0, 2.0});
  EXPECT_THROW(noise_envelope(tr, 0.5), DomainError);
  EXPECT_THROW(noise_envelope(Trace{}, 0.0), DomainError);
}

TEST(IntegralAbsError, TrapezoidOnLinearRamp) {
  Trace tr;
  for (int k = 0; k <= 10; ++k) {
    tr.t.push_back(0.1 * k);
    tr.omega.push_back(2.0 - 0.2 * k);
  }
  // |2 - 2t - 1| over [0, 1] integrates to 1/2 exactly with a node at t = 0.5.
  EXPECT_NEAR(integral_abs_error(tr, 1.0), 0.5, 1e-12);
}
