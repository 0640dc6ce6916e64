#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ambiact/labelling.hpp"

namespace ambiact {

inline constexpr std::int64_t kDayMs = 24LL * 60 * 60 * 1000;

/// Fixed offset from UTC; days are split at local midnight.
struct TimeZone {
  int offset_minutes = 0;

  std::int64_t offset_ms() const noexcept { return static_cast<std::int64_t>(offset_minutes) * 60000; }
  /// Days since 1970-01-01 of the local calendar date containing ts.
  std::int64_t day_index(TimestampMs ts) const noexcept;
  /// UTC epoch ms of local midnight of a day index.
  TimestampMs midnight(std::int64_t day_index) const noexcept { return day_index * kDayMs - offset_ms(); }
  /// Milliseconds since local midnight.
  std::int64_t time_of_day(TimestampMs ts) const noexcept;
};

/// "YYYY-MM-DD" of a day index.
std::string format_date(std::int64_t day_index);
/// "HH:MM:SS" of a local time of day (ms since midnight).
std::string format_clock(std::int64_t ms_of_day);
/// Parses "HH:MM" or "HH:MM:SS" (24:00 allowed) to ms since midnight.
std::int64_t parse_clock(std::string_view text);

struct Bout {
  std::string label;
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;

  friend bool operator==(const Bout&, const Bout&) = default;
};

/// Maximal runs of equal labels over contiguous windows. NoData windows and
/// time gaps between windows end a run; NoData never forms a bout.
std::vector<Bout> bouts(std::span<const WindowLabel> windows);

struct DayProfile {
  std::int64_t day = 0;  // day index, see TimeZone::day_index
  std::int64_t coverage_ms = 0;  // total span of the windows, NoData included
  std::int64_t nodata_ms = 0;
  std::map<std::string, std::int64_t> duration_ms;
  std::map<std::string, std::size_t> bout_count;

  std::string date() const { return format_date(day); }
  /// Percentage of coverage spent on `label`.
  double share_pct(const std::string& label) const;

  friend bool operator==(const DayProfile&, const DayProfile&) = default;
};

/// Throws Error("split at day boundary first") when the windows do not all
/// lie within one local calendar day.
DayProfile day_profile(std::span<const WindowLabel> windows, const TimeZone& tz = {});

/// Groups windows by the local day of their start.
std::vector<std::vector<WindowLabel>> split_by_day(std::span<const WindowLabel> windows, const TimeZone& tz = {});

struct WeekProfile {
  std::vector<DayProfile> days;                      // 7, consecutive
  std::map<std::string, std::array<bool, 7>> occurrence;
};

/// Throws Error on a count other than 7 or non-consecutive days.
WeekProfile week_profile(std::span<const DayProfile> days);

struct IntervalStats {
  std::size_t bouts = 0;
  std::int64_t duration_ms = 0;

  friend bool operator==(const IntervalStats&, const IntervalStats&) = default;
};

/// Bouts and total duration of `label` among windows whose local start time
/// falls in [from_ms, to_ms). Throws Error("inverted time range") if
/// from_ms > to_ms.
IntervalStats interval_query(std::span<const WindowLabel> windows, std::int64_t from_ms, std::int64_t to_ms,
                             std::string_view label, const TimeZone& tz = {});

/// JSON document with one entry per day and, when the input spans exactly
/// seven consecutive days, a week section.
std::string profile_json(std::span<const DayProfile> days, bool human_readable = false);
/// CSV `date,label,duration_ms,share_pct,bouts`, NoData included as a row.
std::string profile_csv(std::span<const DayProfile> days);

/// Day profiles of every local day in a window list.
std::vector<DayProfile> profile_days(std::span<const WindowLabel> windows, const TimeZone& tz = {});

}  // namespace ambiact
