#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ambiact/butterworth.hpp"
#include "ambiact/centroid.hpp"
#include "ambiact/features.hpp"
#include "ambiact/fusion.hpp"
#include "ambiact/labelling.hpp"
#include "ambiact/occupancy.hpp"
#include "ambiact/profile.hpp"
#include "ambiact/simulator.hpp"

namespace ambiact {

struct PipelineConfig {
  std::int64_t max_gap_ms = kDefaultMaxGapMs;
  FilterSpec filter;
  std::size_t window_len = kDefaultWindowLen;
  double overlap = kDefaultOverlap;
  int span_minutes = 2;
  TimeZone tz;
  DetectorOptions detector;
  FusionRuleTable rules;
  PriorityTable priorities;
};

/// Cuts the series at local midnight, then interpolates gaps within each
/// day, so that every day is processed on its own.
std::vector<SampleSeries> prepare_segments(const SampleSeries& series, std::int64_t max_gap_ms, const TimeZone& tz);

std::vector<SampleSeries> filter_segments(std::span<const SampleSeries> segments, const FilterSpec& spec);

/// Sliding windows of every segment, features extracted in parallel.
std::vector<FeatureVector> segment_features(std::span<const SampleSeries> segments, std::size_t window_len,
                                            double overlap);

struct WindowPrediction {
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  std::string label;

  TimestampMs centre_ts() const noexcept { return start_ts + (end_ts - start_ts) / 2; }
  friend bool operator==(const WindowPrediction&, const WindowPrediction&) = default;
};

std::vector<WindowPrediction> predict_windows(std::span<const FeatureVector> rows, const CentroidModel& model);

// CSV `start_ts,end_ts,label`; extra columns after label are ignored on read.
std::string format_predictions(std::span<const WindowPrediction> predictions);
std::vector<WindowPrediction> parse_predictions(const std::vector<std::string>& lines,
                                                std::string_view source_name = "<predictions>");
std::vector<WindowPrediction> read_predictions(const std::filesystem::path& path);

/// Each tick [t, t + tick_ms) on the epoch-aligned grid takes the label of
/// the window whose centre is nearest the tick midpoint, among windows
/// containing that midpoint (earlier window on a tie). Ticks covered by no
/// window are omitted; labels that are not basic activities leave the tick
/// without one.
std::vector<BasicTick> assign_ticks(std::span<const WindowPrediction> predictions, std::int64_t tick_ms = kTickMs);

/// Ticks -> sleep rule -> fusion with room/appliance context.
std::vector<DerivedTick> derive_timeline(std::span<const WindowPrediction> predictions,
                                         const OccupancyResult& context, const FusionRuleTable& rules);

/// Per local day, tumbling windows starting at midnight.
std::vector<WindowLabel> label_days(std::span<const DerivedTick> timeline, int span_minutes,
                                    const PriorityTable& priorities, const TimeZone& tz);

/// Fits the centroid classifier on a simulated calibration session processed
/// exactly like pipeline input.
CentroidModel calibrate(const sim::SimConfig& sim_config, const PipelineConfig& config);

/// Per-window predictions for one inertial series.
struct InertialStages {
  std::vector<SampleSeries> filtered;
  std::vector<FeatureVector> features;
  std::vector<WindowPrediction> predictions;
};
InertialStages run_inertial(const SampleSeries& series, const CentroidModel& model, const PipelineConfig& config);

struct PipelineResult {
  std::vector<WindowPrediction> predictions;
  OccupancyResult occupancy;
  std::vector<DerivedTick> timeline;
  std::vector<WindowLabel> labels;
  std::vector<DayProfile> days;
};

/// Context and labelling stages after classification.
PipelineResult finish_pipeline(std::vector<WindowPrediction> predictions, std::span<const AmbientEvent> events,
                               const PipelineConfig& config);

/// Whole chain on a simulated script, one day of inertial data at a time.
PipelineResult run_simulated(const sim::Script& script, const sim::SimConfig& sim_config, const CentroidModel& model,
                             const PipelineConfig& config);

}  // namespace ambiact
