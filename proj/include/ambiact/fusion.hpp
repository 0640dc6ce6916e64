#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ambiact/ambient.hpp"
#include "ambiact/occupancy.hpp"

namespace ambiact {

enum class BasicActivity { Walk, Jog, Sit, Stand, Lie, Sleep, StairUp, StairDown };

inline constexpr std::array<BasicActivity, 8> kAllBasicActivities = {
    BasicActivity::Walk, BasicActivity::Jog,   BasicActivity::Sit,     BasicActivity::Stand,
    BasicActivity::Lie,  BasicActivity::Sleep, BasicActivity::StairUp, BasicActivity::StairDown};

/// "walk", "jog", "sit", "stand", "lie", "sleep", "stairUp", "stairDown".
std::string_view to_string(BasicActivity a);
/// Case-insensitive; also accepts WISDM-style names (Walking, Upstairs, ...).
std::optional<BasicActivity> parse_basic(std::string_view text);

enum class ActivityFlag { Normal, Unnatural, Anomaly };

std::string_view to_string(ActivityFlag f);
std::optional<ActivityFlag> parse_flag(std::string_view text);

struct DerivedActivity {
  std::string name;
  ActivityFlag flag = ActivityFlag::Normal;

  friend bool operator==(const DerivedActivity&, const DerivedActivity&) = default;
};

/// One row of the fusion table. Empty optionals are wildcards; an empty
/// appliance means the rule needs no appliance.
struct FusionRule {
  std::optional<BasicActivity> basic;
  std::optional<RoomId> room;
  std::string appliance;
  DerivedActivity result;

  friend bool operator==(const FusionRule&, const FusionRule&) = default;
};

/// Ordered rule list plus a fallback for unmatched contexts.
///
/// Selection among matching rules: rules whose appliance is active beat
/// rules without one; then rules naming both basic and room beat those with
/// a wildcard; then file order.
class FusionRuleTable {
 public:
  FusionRuleTable() = default;
  explicit FusionRuleTable(std::vector<FusionRule> rules,
                           DerivedActivity fallback = {"Unknown", ActivityFlag::Unnatural});

  const std::vector<FusionRule>& rules() const noexcept { return rules_; }
  const DerivedActivity& fallback() const noexcept { return fallback_; }

  DerivedActivity fuse(std::optional<BasicActivity> basic, RoomId room,
                       const std::set<std::string>& appliances) const;

  friend bool operator==(const FusionRuleTable&, const FusionRuleTable&) = default;

 private:
  std::vector<FusionRule> rules_;
  DerivedActivity fallback_{"Unknown", ActivityFlag::Unnatural};
};

// Rule CSV: basic,room,appliance,derived_name,flag
//   basic "-" or "*" = any (including none); room "*" = any;
//   an optional `default,,,<name>,<flag>` row replaces the fallback.
FusionRuleTable parse_rules(const std::vector<std::string>& lines, std::string_view source_name = "<rules>");
FusionRuleTable read_rules(const std::filesystem::path& path);
std::string format_rules(const FusionRuleTable& table);

inline constexpr std::int64_t kTickMs = 5000;
inline constexpr std::int64_t kSleepAfterMs = 5 * 60 * 1000;

struct BasicTick {
  TimestampMs ts = 0;
  std::optional<BasicActivity> basic;

  friend bool operator==(const BasicTick&, const BasicTick&) = default;
};

/// Rewrites every maximal run of Lie lasting at least `min_still_ms` to Sleep.
/// A run is consecutive Lie ticks no more than `tick_ms` apart; its length
/// is last.ts + tick_ms - first.ts.
std::vector<BasicTick> derive_sleep(std::span<const BasicTick> timeline, std::int64_t min_still_ms = kSleepAfterMs,
                                    std::int64_t tick_ms = kTickMs);

struct DerivedTick {
  TimestampMs ts = 0;
  DerivedActivity activity;

  friend bool operator==(const DerivedTick&, const DerivedTick&) = default;
};

/// Fuses each tick with the room and active appliances at its timestamp.
std::vector<DerivedTick> fuse_timeline(std::span<const BasicTick> ticks, const OccupancyResult& context,
                                       const FusionRuleTable& rules);

struct FlagRun {
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  ActivityFlag flag = ActivityFlag::Unnatural;

  friend bool operator==(const FlagRun&, const FlagRun&) = default;
};

/// Maximal runs of consecutive non-Normal ticks with the same flag.
std::vector<FlagRun> flag_stream(std::span<const DerivedTick> timeline, std::int64_t tick_ms = kTickMs);

// Timeline CSV: ts,derived_name,flag
std::string format_timeline(std::span<const DerivedTick> timeline);
std::vector<DerivedTick> parse_timeline(const std::vector<std::string>& lines,
                                        std::string_view source_name = "<timeline>");
std::vector<DerivedTick> read_timeline(const std::filesystem::path& path);

}  // namespace ambiact
