#include "ambiact/occupancy.hpp"

#include <algorithm>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

std::vector<BinarySpan> detect_spans(std::span<const AmbientEvent> events, const DetectorOptions& options) {
  std::vector<BinarySpan> spans;
  bool occupied = false;
  TimestampMs start = 0;
  TimestampMs last_one = 0;
  auto close = [&](TimestampMs end, bool truncated) {
    if (end > start) spans.push_back({start, end, truncated});
    occupied = false;
  };
  for (const auto& e : events) {
    if (occupied && options.inactivity_timeout_ms && e.ts - last_one > *options.inactivity_timeout_ms) {
      close(last_one + *options.inactivity_timeout_ms, false);
    }
    if (e.state == 1) {
      if (!occupied) {
        occupied = true;
        start = e.ts;
      }
      last_one = e.ts;
    } else if (occupied) {
      close(e.ts, false);
    }
  }
  if (occupied) {
    TimestampMs end = events.empty() ? start : events.back().ts;
    if (options.stream_end_ts) end = std::max(end, *options.stream_end_ts);
    if (options.inactivity_timeout_ms && end - last_one > *options.inactivity_timeout_ms) {
      close(last_one + *options.inactivity_timeout_ms, false);
    } else {
      close(end, true);
    }
  }
  return spans;
}

std::vector<OccupancyInterval> detect_room_intervals(std::span<const AmbientEvent> events,
                                                     const DetectorOptions& options) {
  std::optional<RoomId> room;
  for (const auto& e : events) {
    const auto r = e.source.room();
    if (!r) throw Error("detect_room_intervals: non-PIR event from " + e.source.topic());
    if (room && *room != *r) throw Error("detect_room_intervals: events from more than one room");
    room = r;
  }
  std::vector<OccupancyInterval> out;
  for (const auto& s : detect_spans(events, options)) {
    out.push_back({room.value_or(RoomId::Outside), s.start_ts, s.end_ts, s.truncated});
  }
  return out;
}

std::vector<OccupancyInterval> resolve_single_person(
    const std::map<RoomId, std::vector<OccupancyInterval>>& per_room) {
  std::vector<OccupancyInterval> all;
  for (const auto& [room, intervals] : per_room) {
    for (auto iv : intervals) {
      iv.room = room;
      if (iv.end_ts > iv.start_ts) all.push_back(iv);
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const OccupancyInterval& a, const OccupancyInterval& b) {
    if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
    return to_string(a.room) < to_string(b.room);
  });
  std::vector<OccupancyInterval> out;
  out.reserve(all.size());
  for (const auto& iv : all) {
    // Earlier intervals already end at or before the previous start, so
    // only the tail can overlap; drop tails that become empty.
    while (!out.empty() && out.back().end_ts > iv.start_ts) {
      out.back().end_ts = iv.start_ts;
      if (out.back().end_ts <= out.back().start_ts) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(iv);
  }
  return out;
}

std::vector<ApplianceInterval> appliance_intervals(std::span<const AmbientEvent> events,
                                                   const DetectorOptions& options) {
  std::string name;
  for (const auto& e : events) {
    if (e.source.kind == SensorKind::pir) throw Error("appliance_intervals: PIR event from " + e.source.topic());
    if (!name.empty() && name != e.source.location) throw Error("appliance_intervals: events from more than one appliance");
    name = e.source.location;
  }
  std::vector<ApplianceInterval> out;
  for (const auto& s : detect_spans(events, options)) out.push_back({name, s.start_ts, s.end_ts, s.truncated});
  return out;
}

RoomId locate(TimestampMs ts, std::span<const OccupancyInterval> resolved) {
  auto it = std::upper_bound(resolved.begin(), resolved.end(), ts,
                             [](TimestampMs t, const OccupancyInterval& iv) { return t < iv.start_ts; });
  if (it == resolved.begin()) return RoomId::Outside;
  --it;
  return ts < it->end_ts ? it->room : RoomId::Outside;
}

std::set<std::string> active_appliances(TimestampMs ts, std::span<const ApplianceInterval> intervals) {
  std::set<std::string> out;
  for (const auto& iv : intervals) {
    if (iv.start_ts <= ts && ts < iv.end_ts) out.insert(iv.appliance);
  }
  return out;
}

OccupancyResult reconstruct_occupancy(std::span<const AmbientEvent> events, const DetectorOptions& options) {
  OccupancyResult result;
  std::map<RoomId, std::vector<OccupancyInterval>> per_room;
  DetectorOptions opts = options;
  if (!opts.stream_end_ts && !events.empty()) {
    TimestampMs last = events.front().ts;
    for (const auto& e : events) last = std::max(last, e.ts);
    opts.stream_end_ts = last;
  }
  for (const auto& [source, stream] : split_by_source(events)) {
    if (source.kind == SensorKind::pir) {
      per_room[*source.room()] = detect_room_intervals(stream, opts);
    } else {
      auto iv = appliance_intervals(stream, opts);
      result.appliances.insert(result.appliances.end(), iv.begin(), iv.end());
    }
  }
  result.rooms = resolve_single_person(per_room);
  std::stable_sort(result.appliances.begin(), result.appliances.end(),
                   [](const ApplianceInterval& a, const ApplianceInterval& b) {
                     if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
                     return a.appliance < b.appliance;
                   });
  return result;
}

namespace {

std::string_view appliance_kind(std::string_view appliance) {
  return appliance == "water_bottle" ? "force" : "relay";
}

}  // namespace

std::string format_intervals(const OccupancyResult& result) {
  std::string out = "kind,location,start_ts,end_ts,truncated\n";
  for (const auto& iv : result.rooms) {
    out += "pir," + std::string(room_token(iv.room)) + "," + std::to_string(iv.start_ts) + "," +
           std::to_string(iv.end_ts) + "," + (iv.truncated ? "1" : "0") + "\n";
  }
  for (const auto& iv : result.appliances) {
    out += std::string(appliance_kind(iv.appliance)) + "," + iv.appliance + "," + std::to_string(iv.start_ts) +
           "," + std::to_string(iv.end_ts) + "," + (iv.truncated ? "1" : "0") + "\n";
  }
  return out;
}

OccupancyResult parse_intervals(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  OccupancyResult r;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty()) continue;
    if (!header) {
      if (line != "kind,location,start_ts,end_ts,truncated") throw ParseError(src, ln + 1, "missing interval header");
      header = true;
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 5) throw ParseError(src, ln + 1, "expected 5 fields");
    try {
      const auto kind = parse_sensor_kind(f[0]);
      if (!kind) throw Error("unknown sensor kind '" + f[0] + "'");
      const SensorAddress addr = make_address(*kind, f[1]);
      const TimestampMs start = io::parse_int(f[2]);
      const TimestampMs end = io::parse_int(f[3]);
      if (end <= start) throw Error("interval end must be after start");
      if (f[4] != "0" && f[4] != "1") throw Error("truncated must be 0 or 1");
      const bool truncated = f[4] == "1";
      if (*kind == SensorKind::pir) {
        r.rooms.push_back({*addr.room(), start, end, truncated});
      } else {
        r.appliances.push_back({addr.location, start, end, truncated});
      }
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
  }
  if (!header) throw ParseError(src, 0, "missing interval header");
  for (std::size_t i = 1; i < r.rooms.size(); ++i) {
    if (r.rooms[i].start_ts < r.rooms[i - 1].end_ts) throw ParseError(src, 0, "room intervals overlap or are unordered");
  }
  return r;
}

OccupancyResult read_intervals(const std::filesystem::path& path) {
  return parse_intervals(io::read_lines(path), path.string());
}

}  // namespace ambiact
