#include "ambiact/ambient.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

namespace {

constexpr std::array<std::string_view, 7> kRoomNames = {"Bedroom", "Kitchen",  "Hall",   "Worship",
                                                        "Stairs",  "Bathroom", "Outside"};
constexpr std::array<std::string_view, 7> kRoomTokens = {"bedroom", "kitchen",  "hall",   "worship",
                                                         "stairs",  "bathroom", "outside"};
constexpr std::array<std::string_view, 3> kKindNames = {"pir", "relay", "force"};

}  // namespace

std::string_view to_string(RoomId room) { return kRoomNames[static_cast<std::size_t>(room)]; }
std::string_view room_token(RoomId room) { return kRoomTokens[static_cast<std::size_t>(room)]; }

std::optional<RoomId> parse_room(std::string_view text) {
  std::string key;
  for (char c : io::normalize_key(text)) {
    if (c != ' ' && c != '_') key.push_back(c);
  }
  for (std::size_t i = 0; i < kRoomTokens.size(); ++i) {
    if (key == kRoomTokens[i]) return static_cast<RoomId>(i);
  }
  return std::nullopt;
}

std::string_view to_string(SensorKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<SensorKind> parse_sensor_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (text == kKindNames[i]) return static_cast<SensorKind>(i);
  }
  return std::nullopt;
}

bool is_appliance(std::string_view name) {
  return std::find(kApplianceNames.begin(), kApplianceNames.end(), name) != kApplianceNames.end();
}

std::optional<RoomId> SensorAddress::room() const {
  if (kind != SensorKind::pir) return std::nullopt;
  return parse_room(location);
}

std::string SensorAddress::topic() const {
  return "home/" + std::string(to_string(kind)) + "/" + location;
}

bool operator<(const SensorAddress& a, const SensorAddress& b) {
  const auto ka = to_string(a.kind), kb = to_string(b.kind);
  if (ka != kb) return ka < kb;
  return a.location < b.location;
}

SensorAddress make_address(SensorKind kind, std::string_view location) {
  switch (kind) {
    case SensorKind::pir: {
      const auto room = parse_room(location);
      if (!room) throw Error("unknown location '" + std::string(location) + "'");
      if (*room == RoomId::Outside) throw Error("no PIR sensor outside the home");
      return SensorAddress{kind, std::string(room_token(*room))};
    }
    case SensorKind::relay:
      if (location == "tv" || location == "mirror_bulb" || location == "bathroom_switch") {
        return SensorAddress{kind, std::string(location)};
      }
      break;
    case SensorKind::force:
      if (location == "water_bottle") return SensorAddress{kind, std::string(location)};
      break;
  }
  throw Error("unknown location '" + std::string(location) + "' for " + std::string(to_string(kind)));
}

bool event_before(const AmbientEvent& a, const AmbientEvent& b) {
  if (a.ts != b.ts) return a.ts < b.ts;
  return a.source < b.source;
}

AmbientEvent parse_event_line(std::string_view line, std::size_t line_no, std::string_view source_name) {
  using nlohmann::json;
  const std::string src(source_name);
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error&) {
    throw ParseError(src, line_no, "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError(src, line_no, "event must be a JSON object");
  AmbientEvent e;
  if (!doc.contains("ts") || !doc["ts"].is_number_integer()) {
    throw ParseError(src, line_no, "missing or non-integer ts");
  }
  e.ts = doc["ts"].get<std::int64_t>();
  if (!doc.contains("topic") || !doc["topic"].is_string()) throw ParseError(src, line_no, "malformed topic");
  const auto parts = io::split(doc["topic"].get<std::string>(), '/');
  if (parts.size() != 3 || parts[0] != "home") throw ParseError(src, line_no, "malformed topic");
  const auto kind = parse_sensor_kind(parts[1]);
  if (!kind) throw ParseError(src, line_no, "malformed topic: unknown sensor kind '" + parts[1] + "'");
  try {
    e.source = make_address(*kind, parts[2]);
  } catch (const Error& err) {
    throw ParseError(src, line_no, err.what());
  }
  if (e.source.location != parts[2]) throw ParseError(src, line_no, "unknown location '" + parts[2] + "'");
  if (!doc.contains("payload")) throw ParseError(src, line_no, "invalid payload");
  const auto& p = doc["payload"];
  if (p.is_string() && (p == "0" || p == "1")) {
    e.state = p == "1" ? 1 : 0;
  } else {
    throw ParseError(src, line_no, "invalid payload");
  }
  return e;
}

std::string format_event(const AmbientEvent& e) {
  return "{\"ts\":" + std::to_string(e.ts) + ",\"topic\":\"" + e.source.topic() + "\",\"payload\":\"" +
         (e.state ? "1" : "0") + "\"}";
}

std::vector<AmbientEvent> parse_events(const std::vector<std::string>& lines, std::string_view source_name) {
  std::vector<AmbientEvent> events;
  events.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (io::trim(lines[i]).empty()) continue;
    events.push_back(parse_event_line(lines[i], i + 1, source_name));
  }
  return events;
}

std::vector<AmbientEvent> read_events(const std::filesystem::path& path) {
  return parse_events(io::read_lines(path), path.string());
}

std::string format_events(std::span<const AmbientEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

std::vector<AmbientEvent> merge_streams(std::span<const std::vector<AmbientEvent>> streams) {
  std::size_t total = 0;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const auto& st = streams[s];
    for (std::size_t i = 1; i < st.size(); ++i) {
      if (st[i].ts < st[i - 1].ts) {
        throw Error("stream " + std::to_string(s) + " is not ordered by ts at index " + std::to_string(i));
      }
    }
    total += st.size();
  }
  struct Head {
    std::size_t stream;
    std::size_t index;
  };
  auto later = [&](const Head& a, const Head& b) {
    const auto& ea = streams[a.stream][a.index];
    const auto& eb = streams[b.stream][b.index];
    if (event_before(eb, ea)) return true;
    if (event_before(ea, eb)) return false;
    return a.stream > b.stream;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
  for (std::size_t s = 0; s < streams.size(); ++s) {
    if (!streams[s].empty()) heap.push({s, 0});
  }
  std::vector<AmbientEvent> out;
  out.reserve(total);
  while (!heap.empty()) {
    const Head h = heap.top();
    heap.pop();
    out.push_back(streams[h.stream][h.index]);
    if (h.index + 1 < streams[h.stream].size()) heap.push({h.stream, h.index + 1});
  }
  return out;
}

std::map<SensorAddress, std::vector<AmbientEvent>> split_by_source(std::span<const AmbientEvent> events) {
  std::map<SensorAddress, std::vector<AmbientEvent>> out;
  for (const auto& e : events) out[e.source].push_back(e);
  return out;
}

std::vector<AmbientEvent> apply_clock_offsets(std::span<const AmbientEvent> events,
                                              const std::map<SensorAddress, std::int64_t>& offsets) {
  std::vector<AmbientEvent> out(events.begin(), events.end());
  for (auto& e : out) {
    if (const auto it = offsets.find(e.source); it != offsets.end()) e.ts += it->second;
  }
  return out;
}

}  // namespace ambiact
