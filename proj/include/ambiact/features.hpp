#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ambiact/signal.hpp"

namespace ambiact {

inline constexpr std::size_t kHistogramBins = 10;
inline constexpr double kHistogramLow = -20.0;
inline constexpr double kHistogramHigh = 20.0;
inline constexpr std::size_t kAccelFeatureCount = 43;
inline constexpr std::string_view kFeatureLayoutVersion = "ambiact.features.v1";

/// Statistics of one group of three axes (accelerometer or gyroscope).
struct AxisGroupStats {
  std::array<double, 3> mean{};
  std::array<double, 3> std{};
  std::array<double, 3> avg_abs_diff{};
  double avg_resultant = 0.0;
  std::array<double, 3> time_between_peaks_ms{};
  std::array<std::array<double, kHistogramBins>, 3> bin_fractions{};
};

/// Per-window feature row. `values` and `names` are parallel; the layout is
/// mean[3], std[3], avg_abs_diff[3], avg_resultant, time_between_peaks[3],
/// bins x[10] y[10] z[10], optionally followed by the same 43 for the gyro.
struct FeatureVector {
  using Layout = std::shared_ptr<const std::vector<std::string>>;

  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  Layout layout;  // shared between rows of one extraction
  std::vector<double> values;

  const std::vector<std::string>& names() const { return *layout; }
  std::size_t size() const noexcept { return values.size(); }
};

struct FeatureOptions {
  /// Append gyroscope statistics when every sample of the window has them.
  bool include_gyro = false;
  std::int64_t period_ms = 50;
};

/// Names for the accelerometer-only (43) or accelerometer+gyro (86) layout.
std::vector<std::string> feature_names(bool with_gyro);
/// The same names, shared.
FeatureVector::Layout feature_layout(bool with_gyro);

/// Mean gap in ms between consecutive peaks; a peak is a strict local maximum
/// above mean + 0.5 * population std. Returns 0 for fewer than two peaks.
double time_between_peaks(std::span<const double> axis_values, std::int64_t period_ms);

AxisGroupStats axis_group_stats(std::span<const double> x, std::span<const double> y,
                                std::span<const double> z, std::int64_t period_ms);

/// Throws Error("degenerate window") for fewer than 2 samples.
FeatureVector extract_features(const SampleWindow& window, const FeatureOptions& options = {});

/// Batch extraction; the serial loop is the reference for the OpenMP one.
std::vector<FeatureVector> extract_features_serial(std::span<const SampleWindow> windows,
                                                   const FeatureOptions& options = {});
std::vector<FeatureVector> extract_features_parallel(std::span<const SampleWindow> windows,
                                                     const FeatureOptions& options = {});

// --- feature CSV ---------------------------------------------------------------
// # layout=ambiact.features.v1 count=43
// start_ts,end_ts,<names...>
// <start>,<end>,<values...>

std::string format_features(std::span<const FeatureVector> rows);
std::vector<FeatureVector> parse_features(const std::vector<std::string>& lines,
                                          std::string_view source_name = "<input>");
std::vector<FeatureVector> read_features(const std::filesystem::path& path);

}  // namespace ambiact
