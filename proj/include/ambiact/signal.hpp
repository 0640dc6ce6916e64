#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ambiact {

/// Epoch milliseconds (UTC).
using TimestampMs = std::int64_t;

struct TriaxialSample {
  TimestampMs ts = 0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
  std::optional<std::array<double, 3>> gyro;  // rad/s

  friend bool operator==(const TriaxialSample&, const TriaxialSample&) = default;
};

struct SampleSeries {
  std::string subject_id;
  std::int64_t nominal_period_ms = 50;
  std::vector<TriaxialSample> samples;

  bool empty() const noexcept { return samples.empty(); }
  std::size_t size() const noexcept { return samples.size(); }

  friend bool operator==(const SampleSeries&, const SampleSeries&) = default;
};

/// A fixed-length run of samples borrowed from a SampleSeries.
/// The window does not own its samples: the series must outlive it.
/// end_ts is exclusive: last sample ts + the series' nominal period.
struct SampleWindow {
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  std::span<const TriaxialSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  TimestampMs centre_ts() const noexcept { return start_ts + (end_ts - start_ts) / 2; }
};

inline constexpr std::int64_t kDefaultMaxGapMs = 1000;
inline constexpr std::size_t kDefaultWindowLen = 128;
inline constexpr double kDefaultOverlap = 0.5;

/// Fills missing grid points by per-axis linear interpolation.
///
/// The grid of each output segment is anchored at that segment's first input
/// sample and stepped by nominal_period_ms. Consecutive input samples further
/// apart than max_gap_ms start a new segment; nothing is synthesized inside
/// such a gap. Gyroscope values are interpolated only when both neighbours
/// carry them.
///
/// Throws Error("empty input") for an empty series and Error on timestamps
/// that are not strictly increasing.
std::vector<SampleSeries> interpolate_gaps(const SampleSeries& series,
                                           std::int64_t max_gap_ms = kDefaultMaxGapMs);

/// hop = max(1, round(window_len * (1 - overlap_frac))).
std::size_t hop_length(std::size_t window_len, double overlap_frac);

/// Sliding windows over a gapless series; the trailing remainder is dropped.
/// Returns an empty list when window_len exceeds the series length.
std::vector<SampleWindow> segment(const SampleSeries& series,
                                  std::size_t window_len = kDefaultWindowLen,
                                  double overlap_frac = kDefaultOverlap);

// --- WISDM-style text format -------------------------------------------------
// subject_id,activity_hint,timestamp_ms,ax,ay,az[,gx,gy,gz];

/// Parses inertial text. Samples are grouped per subject in order of first
/// appearance. Empty lines are skipped. Errors name the source and line.
std::vector<SampleSeries> parse_inertial(const std::vector<std::string>& lines,
                                         std::string_view source_name = "<input>",
                                         std::int64_t nominal_period_ms = 50);
std::vector<SampleSeries> read_inertial(const std::filesystem::path& path,
                                        std::int64_t nominal_period_ms = 50);

/// Serializes a series; `hints` is either empty or parallel to the samples.
void append_inertial(std::string& out, const SampleSeries& series,
                     std::span<const std::string> hints = {});
std::string format_inertial(std::span<const SampleSeries> series);

/// Concatenates segments of one subject back into a single series
/// (timestamps must keep increasing).
SampleSeries concat_segments(std::span<const SampleSeries> segments);

}  // namespace ambiact
