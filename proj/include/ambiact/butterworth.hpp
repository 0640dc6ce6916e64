#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ambiact/signal.hpp"

namespace ambiact {

struct FilterSpec {
  int order = 3;
  double cutoff_hz = 3.0;
  double sample_rate_hz = 20.0;

  /// Throws Error("invalid cutoff") when cutoff >= Nyquist, Error otherwise
  /// for non-positive fields.
  void validate() const;
};

/// One second-order (or first-order, with b2 = a2 = 0) section,
/// H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct Biquad {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Digital Butterworth low-pass designed by the bilinear transform with
/// frequency prewarping, realised as cascaded sections in transposed
/// direct form II.
class ButterworthLowpass {
 public:
  explicit ButterworthLowpass(const FilterSpec& spec);

  const FilterSpec& spec() const noexcept { return spec_; }
  std::span<const Biquad> sections() const noexcept { return sections_; }

  /// Frequency response of the designed cascade at `freq_hz`.
  std::complex<double> response(double freq_hz) const;

  /// Causal filtering. The state starts at the steady state of x[0], so a
  /// constant input passes through unchanged from the first sample.
  std::vector<double> apply(std::span<const double> x) const;

 private:
  FilterSpec spec_;
  std::vector<Biquad> sections_;
};

/// Filters each axis (and gyroscope axes, when present on every sample)
/// independently. Timestamps are copied unchanged.
SampleSeries butterworth_lowpass(const SampleSeries& series, const FilterSpec& spec);

}  // namespace ambiact
