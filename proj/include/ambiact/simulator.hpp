#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ambiact/ambient.hpp"
#include "ambiact/fusion.hpp"
#include "ambiact/occupancy.hpp"
#include "ambiact/profile.hpp"
#include "ambiact/signal.hpp"

namespace ambiact::sim {

inline constexpr double kGravity = 9.81;

/// One scripted activity. Offsets are relative to local midnight of day 0.
struct ScheduleEntry {
  std::int64_t start_ms = 0;
  std::int64_t duration_ms = 0;
  RoomId room = RoomId::Outside;
  BasicActivity basic = BasicActivity::Stand;
  std::set<std::string> appliances;

  std::int64_t end_ms() const noexcept { return start_ms + duration_ms; }
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Script {
  std::vector<ScheduleEntry> entries;  // ordered, non-overlapping

  std::int64_t end_ms() const noexcept { return entries.empty() ? 0 : entries.back().end_ms(); }
  /// Number of local days touched by the script.
  std::int64_t day_count() const noexcept;
};

// CSV `clock_start,duration_s,room,basic,appliances`; clock_start is
// `[d.]HH:MM:SS` (d = day number, default 0), appliances pipe-separated.
// Throws ParseError for malformed rows and "overlapping entries".
Script parse_script(const std::vector<std::string>& lines, std::string_view source_name = "<script>");
Script read_script(const std::filesystem::path& path);
std::string format_script(const Script& script);

struct NoiseSpec {
  double gaussian_sigma = 0.0;  // m/s², every axis
  double dropout_prob = 0.0;    // per inertial sample
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimConfig {
  /// UTC epoch ms of local midnight of script day 0 (2024-01-01 UTC by
  /// default).
  TimestampMs origin_ts = 1704067200000;
  std::int64_t period_ms = 50;
  NoiseSpec noise;
  std::string subject_id = "sim";
};

/// Noise-free acceleration of an activity `t_ms` after it started.
std::array<double, 3> motion_value(BasicActivity basic, std::int64_t t_ms);

/// Samples [0, duration_ms) of one activity starting at start_ts. The
/// generator is seeded from noise.seed alone.
SampleSeries synth_motion(BasicActivity basic, std::int64_t duration_ms, std::int64_t period_ms,
                          const NoiseSpec& noise, TimestampMs start_ts = 0);

/// Inertial samples of one script day, local midnight to midnight, covering
/// only scripted time. Noise and dropout come from a generator seeded with
/// (seed, day), so days can be produced independently.
SampleSeries simulate_day_inertial(const Script& script, std::int64_t day, const SimConfig& config);

/// Whole-script inertial stream (concatenation of the days).
SampleSeries simulate_inertial(const Script& script, const SimConfig& config);

/// Ambient log: PIR 1/0 at room entry/exit (none for Outside) and relay /
/// force 1/0 at appliance start/stop. Consecutive entries sharing a room or
/// appliance produce one continuous interval.
std::vector<AmbientEvent> simulate_events(const Script& script, const SimConfig& config);

/// Room and appliance intervals exactly as scripted.
OccupancyResult scripted_occupancy(const Script& script, const SimConfig& config);

/// One basic tick per kTickMs over scripted time, taking the entry in
/// effect at the tick's start, with the sleep rule applied.
std::vector<BasicTick> truth_basic_ticks(const Script& script, const SimConfig& config);

/// Ground-truth derived timeline.
std::vector<DerivedTick> truth_timeline(const Script& script, const SimConfig& config, const FusionRuleTable& rules);

/// Ten minutes of every classifier activity (walk, jog, sit, stand, lie,
/// stairUp, stairDown), used to fit the centroid model.
Script calibration_script();

}  // namespace ambiact::sim
