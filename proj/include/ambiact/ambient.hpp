#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambiact/signal.hpp"

namespace ambiact {

enum class RoomId { Bedroom, Kitchen, Hall, Worship, Stairs, Bathroom, Outside };

inline constexpr std::array<RoomId, 7> kAllRooms = {RoomId::Bedroom, RoomId::Kitchen, RoomId::Hall,
                                                    RoomId::Worship, RoomId::Stairs,  RoomId::Bathroom,
                                                    RoomId::Outside};

/// Display name ("Bedroom").
std::string_view to_string(RoomId room);
/// Topic token ("bedroom").
std::string_view room_token(RoomId room);
/// Case-insensitive; accepts "Bed Room" style spacing. nullopt if unknown.
std::optional<RoomId> parse_room(std::string_view text);

enum class SensorKind { pir, relay, force };

std::string_view to_string(SensorKind kind);
std::optional<SensorKind> parse_sensor_kind(std::string_view text);

inline constexpr std::array<std::string_view, 4> kApplianceNames = {"tv", "mirror_bulb",
                                                                    "bathroom_switch", "water_bottle"};
bool is_appliance(std::string_view name);

/// kind plus location token: a room token for pir, an appliance name for
/// relay (tv, mirror_bulb, bathroom_switch) and force (water_bottle).
struct SensorAddress {
  SensorKind kind = SensorKind::pir;
  std::string location;

  std::optional<RoomId> room() const;
  std::string topic() const;

  /// Lexicographic on (kind name, location).
  friend bool operator<(const SensorAddress& a, const SensorAddress& b);
  friend bool operator==(const SensorAddress&, const SensorAddress&) = default;
};

/// Validates a kind/location pairing; throws Error on a mismatch.
SensorAddress make_address(SensorKind kind, std::string_view location);

struct AmbientEvent {
  TimestampMs ts = 0;
  SensorAddress source;
  int state = 0;  // 0 or 1

  friend bool operator==(const AmbientEvent&, const AmbientEvent&) = default;
};

/// Total order used by merge_streams: (ts, kind name, location).
bool event_before(const AmbientEvent& a, const AmbientEvent& b);

/// Parses `{"ts": <ms>, "topic": "home/<kind>/<location>", "payload": "0"|"1"}`.
/// Errors are ParseError carrying `line_no`.
AmbientEvent parse_event_line(std::string_view line, std::size_t line_no = 0,
                              std::string_view source_name = "<events>");
/// Canonical single-line form; parse_event_line(format_event(e)) == e.
std::string format_event(const AmbientEvent& e);

/// Reads an event log; blank lines are skipped. File order is preserved.
std::vector<AmbientEvent> parse_events(const std::vector<std::string>& lines,
                                       std::string_view source_name = "<events>");
std::vector<AmbientEvent> read_events(const std::filesystem::path& path);
std::string format_events(std::span<const AmbientEvent> events);

/// K-way merge of individually ts-ordered streams into one sequence ordered
/// by (ts, kind, location); equal keys keep stream order. Throws Error naming
/// the stream and index of the first out-of-order event.
std::vector<AmbientEvent> merge_streams(std::span<const std::vector<AmbientEvent>> streams);

/// Groups events per source, preserving relative order.
std::map<SensorAddress, std::vector<AmbientEvent>> split_by_source(std::span<const AmbientEvent> events);

/// Adds a constant per-source offset (ms) to timestamps, e.g. for a box whose
/// clock runs ahead. Sources without an entry are unchanged.
std::vector<AmbientEvent> apply_clock_offsets(std::span<const AmbientEvent> events,
                                              const std::map<SensorAddress, std::int64_t>& offsets);

}  // namespace ambiact
