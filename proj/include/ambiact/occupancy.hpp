#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ambiact/ambient.hpp"

namespace ambiact {

/// Half-open [start_ts, end_ts) stay of the occupant in one room.
struct OccupancyInterval {
  RoomId room = RoomId::Outside;
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  bool truncated = false;  // still open when the stream ended

  friend bool operator==(const OccupancyInterval&, const OccupancyInterval&) = default;
};

/// Half-open [start_ts, end_ts) ON period of an appliance.
struct ApplianceInterval {
  std::string appliance;
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  bool truncated = false;

  friend bool operator==(const ApplianceInterval&, const ApplianceInterval&) = default;
};

struct DetectorOptions {
  /// Close an open interval this long after its last 1-reading when no
  /// further reading arrives (real PIR hardware goes quiet when the person
  /// is still). Off by default.
  std::optional<std::int64_t> inactivity_timeout_ms;
  /// Where to close an interval that is still open at the end of the
  /// stream; defaults to the last event's ts.
  std::optional<TimestampMs> stream_end_ts;
};

/// Generic 1-opens / 0-closes state machine over one binary source.
/// Repeated 1s while open and 0s while closed are no-ops. A still-open
/// interval at the end is closed at the stream end and flagged truncated;
/// an interval that would be empty is dropped.
struct BinarySpan {
  TimestampMs start_ts;
  TimestampMs end_ts;
  bool truncated;
};
std::vector<BinarySpan> detect_spans(std::span<const AmbientEvent> events, const DetectorOptions& options = {});

/// Occupancy intervals of one PIR source.
std::vector<OccupancyInterval> detect_room_intervals(std::span<const AmbientEvent> events,
                                                     const DetectorOptions& options = {});

/// Global single-occupant timeline: an interval opening inside another
/// room's interval truncates the earlier one at the new start
/// (latest motion wins). For identical starts the lexicographically later
/// room name wins and the earlier interval, now empty, is dropped.
/// Output is ordered by start_ts and pairwise disjoint.
std::vector<OccupancyInterval> resolve_single_person(
    const std::map<RoomId, std::vector<OccupancyInterval>>& per_room);

/// ON intervals of one relay/force source.
std::vector<ApplianceInterval> appliance_intervals(std::span<const AmbientEvent> events,
                                                   const DetectorOptions& options = {});

/// Room containing ts under [start, end); Outside when none does.
/// `resolved` must be disjoint and ordered by start_ts.
RoomId locate(TimestampMs ts, std::span<const OccupancyInterval> resolved);

/// Appliances whose interval contains ts.
std::set<std::string> active_appliances(TimestampMs ts, std::span<const ApplianceInterval> intervals);

struct OccupancyResult {
  std::vector<OccupancyInterval> rooms;        // resolved
  std::vector<ApplianceInterval> appliances;   // ordered by (start, name)
};

/// Splits a merged event log by source and runs detection, resolution and
/// appliance reconstruction.
OccupancyResult reconstruct_occupancy(std::span<const AmbientEvent> events,
                                      const DetectorOptions& options = {});

// CSV `kind,location,start_ts,end_ts,truncated`; rooms first, then appliances.
std::string format_intervals(const OccupancyResult& result);
OccupancyResult parse_intervals(const std::vector<std::string>& lines,
                                std::string_view source_name = "<intervals>");
OccupancyResult read_intervals(const std::filesystem::path& path);

}  // namespace ambiact
