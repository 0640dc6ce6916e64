#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ambiact/butterworth.hpp"
#include "ambiact/error.hpp"

using namespace ambiact;

namespace {

// Closed-form magnitude of a bilinear-transformed Butterworth low-pass with
// prewarped cutoff; independent of the section design.
double oracle_magnitude(const FilterSpec& s, double f) {
  const double ratio = std::tan(std::numbers::pi * f / s.sample_rate_hz) /
                       std::tan(std::numbers::pi * s.cutoff_hz / s.sample_rate_hz);
  return 1.0 / std::sqrt(1.0 + std::pow(ratio, 2 * s.order));
}

std::vector<double> tone(double hz, double fs, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  return x;
}

double peak_after(const std::vector<double>& y, std::size_t from) {
  double m = 0;
  for (std::size_t i = from; i < y.size(); ++i) m = std::max(m, std::abs(y[i]));
  return m;
}

}  // namespace

TEST(Butterworth, ValidatesCutoff) {
  EXPECT_THROW(FilterSpec({3, 10.0, 20.0}).validate(), Error);
  try {
    FilterSpec{3, 12.0, 20.0}.validate();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "invalid cutoff");
  }
  EXPECT_THROW(FilterSpec({0, 3.0, 20.0}).validate(), Error);
  EXPECT_NO_THROW(FilterSpec{}.validate());
}

TEST(Butterworth, ResponseMatchesClosedForm) {
  for (int order = 1; order <= 6; ++order) {
    for (double fc : {1.0, 3.0, 5.0, 8.0}) {
      const FilterSpec spec{order, fc, 20.0};
      const ButterworthLowpass f(spec);
      for (double hz = 0.0; hz < 10.0; hz += 0.25) {
        EXPECT_NEAR(std::abs(f.response(hz)), oracle_magnitude(spec, hz), 1e-9) << order << " " << fc << " " << hz;
      }
    }
  }
}

TEST(Butterworth, EightHertzToneAttenuated) {
  const FilterSpec spec{3, 3.0, 20.0};
  const ButterworthLowpass f(spec);
  const double predicted = oracle_magnitude(spec, 8.0);
  EXPECT_LE(predicted, 0.1);
  const auto y = f.apply(tone(8.0, 20.0, 2000));
  const double measured = peak_after(y, 500);
  EXPECT_LE(measured, 0.1);
  EXPECT_NEAR(measured, predicted, 2e-3);
}

TEST(Butterworth, PassbandToneKeepsAmplitude) {
  const FilterSpec spec{3, 3.0, 20.0};
  const auto y = ButterworthLowpass(spec).apply(tone(0.5, 20.0, 4000));
  EXPECT_NEAR(peak_after(y, 1000), oracle_magnitude(spec, 0.5), 1e-3);
}

TEST(Butterworth, ConstantAndZero) {
  for (int order = 1; order <= 8; ++order) {
    const ButterworthLowpass f({order, 3.0, 20.0});
    const auto y = f.apply(std::vector<double>(200, 5.0));
    for (std::size_t i = 10 * order; i < y.size(); ++i) ASSERT_NEAR(y[i], 5.0, 1e-6);
    for (double v : f.apply(std::vector<double>(50, 0.0))) ASSERT_EQ(v, 0.0);
  }
}

TEST(Butterworth, Linearity) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0, 3);
  const ButterworthLowpass f(FilterSpec{});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(300), y(300), mix(300);
    const double a = g(rng), b = g(rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
      mix[i] = a * x[i] + b * y[i];
    }
    const auto fx = f.apply(x), fy = f.apply(y), fm = f.apply(mix);
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(fm[i], a * fx[i] + b * fy[i], 1e-9);
  }
}

TEST(Butterworth, CausalFilterIgnoresFuture) {
  const ButterworthLowpass f(FilterSpec{});
  std::vector<double> x = tone(1.3, 20.0, 100);
  const auto a = f.apply(x);
  for (std::size_t i = 60; i < x.size(); ++i) x[i] = 100.0;
  const auto b = f.apply(x);
  for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Butterworth, SeriesFilteringKeepsTimestamps) {
  SampleSeries s;
  s.subject_id = "x";
  for (int i = 0; i < 100; ++i) s.samples.push_back({1000 + i * 50LL, 1.0, 9.81, std::sin(i * 0.3), {}});
  const auto out = butterworth_lowpass(s, FilterSpec{});
  ASSERT_EQ(out.size(), s.size());
  EXPECT_EQ(out.subject_id, "x");
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(out.samples[i].ts, s.samples[i].ts);
    EXPECT_NEAR(out.samples[i].ax, 1.0, 1e-12);
    EXPECT_NEAR(out.samples[i].ay, 9.81, 1e-12);
  }
}
