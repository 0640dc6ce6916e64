#include "ambiact/butterworth.hpp"

#include <cmath>
#include <numbers>

#include "ambiact/error.hpp"

namespace ambiact {

void FilterSpec::validate() const {
  if (order < 1) throw Error("filter order must be positive");
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw Error("sample rate must be positive");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) throw Error("invalid cutoff");
}

ButterworthLowpass::ButterworthLowpass(const FilterSpec& spec) : spec_(spec) {
  spec_.validate();
  const double k = std::tan(std::numbers::pi * spec_.cutoff_hz / spec_.sample_rate_hz);
  const double k2 = k * k;
  const int n = spec_.order;
  // Conjugate pole pairs of the normalised analog prototype sit at angles
  // theta_m = pi (2m + n - 1) / (2n), m = 1..n/2; each pair gives a section
  // with 1/Q = -2 cos(theta_m).
  for (int m = 1; m <= n / 2; ++m) {
    const double theta = std::numbers::pi * (2.0 * m + n - 1.0) / (2.0 * n);
    const double inv_q = -2.0 * std::cos(theta);
    const double norm = 1.0 / (1.0 + k * inv_q + k2);
    Biquad s;
    s.b0 = k2 * norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - k * inv_q + k2) * norm;
    sections_.push_back(s);
  }
  if (n % 2 == 1) {
    const double norm = 1.0 / (1.0 + k);
    Biquad s;
    s.b0 = k * norm;
    s.b1 = s.b0;
    s.a1 = (k - 1.0) * norm;
    sections_.push_back(s);
  }
}

std::complex<double> ButterworthLowpass::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / spec_.sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h(1.0, 0.0);
  for (const auto& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

std::vector<double> ButterworthLowpass::apply(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  for (const auto& s : sections_) {
    // Every section has unit DC gain, so its steady state for input c is
    // s1 = (1 - b0) c, s2 = (b2 - a2) c.
    const double c = y.front();
    double z1 = (1.0 - s.b0) * c;
    double z2 = (s.b2 - s.a2) * c;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

SampleSeries butterworth_lowpass(const SampleSeries& series, const FilterSpec& spec) {
  const ButterworthLowpass filter(spec);
  SampleSeries out = series;
  const std::size_t n = series.samples.size();
  if (n == 0) return out;
  bool all_gyro = true;
  for (const auto& s : series.samples) all_gyro = all_gyro && s.gyro.has_value();
  const int channels = all_gyro ? 6 : 3;
  std::vector<double> axis(n);
  for (int c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = series.samples[i];
      axis[i] = c == 0 ? s.ax : c == 1 ? s.ay : c == 2 ? s.az : (*s.gyro)[c - 3];
    }
    const auto filtered = filter.apply(axis);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = out.samples[i];
      double& dst = c == 0 ? s.ax : c == 1 ? s.ay : c == 2 ? s.az : (*s.gyro)[c - 3];
      dst = filtered[i];
    }
  }
  return out;
}

}  // namespace ambiact
