#include "ambiact/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact::sim {

namespace {

constexpr std::string_view kScriptHeader = "clock_start,duration_s,room,basic,appliances";

std::int64_t parse_script_clock(std::string_view text) {
  std::int64_t day = 0;
  std::string_view clock = text;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    day = io::parse_int(text.substr(0, dot));
    if (day < 0) throw Error("negative day in clock '" + std::string(text) + "'");
    clock = text.substr(dot + 1);
  }
  const std::int64_t tod = parse_clock(clock);
  if (tod >= kDayMs) throw Error("clock must be below 24:00:00, use the day prefix");
  return day * kDayMs + tod;
}

std::string format_script_clock(std::int64_t ms) {
  const std::int64_t day = ms / kDayMs;
  std::string out = day > 0 ? std::to_string(day) + "." : "";
  out += format_clock(ms % kDayMs);
  if (ms % 1000 != 0) throw Error("script start times must be whole seconds");
  return out;
}

SensorAddress appliance_address(const std::string& name) {
  return make_address(name == "water_bottle" ? SensorKind::force : SensorKind::relay, name);
}

struct Run {
  std::int64_t start;
  std::int64_t end;
};

// Contiguous runs of entries satisfying `pred`.
template <typename Pred>
std::vector<Run> runs(const Script& script, Pred pred) {
  std::vector<Run> out;
  for (const auto& e : script.entries) {
    if (!pred(e)) continue;
    if (!out.empty() && out.back().end == e.start_ms) {
      out.back().end = e.end_ms();
    } else {
      out.push_back({e.start_ms, e.end_ms()});
    }
  }
  return out;
}

std::set<std::string> scripted_appliances(const Script& script) {
  std::set<std::string> names;
  for (const auto& e : script.entries) names.insert(e.appliances.begin(), e.appliances.end());
  return names;
}

std::mt19937_64 day_engine(std::uint64_t seed, std::int64_t day) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(day)};
  return std::mt19937_64(seq);
}

// Appends samples on the period grid within [from, to) (both absolute).
void emit_samples(SampleSeries& out, BasicActivity basic, TimestampMs entry_start, TimestampMs from, TimestampMs to,
                  TimestampMs grid_origin, std::int64_t period, const NoiseSpec& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, noise.gaussian_sigma > 0 ? noise.gaussian_sigma : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::int64_t k0 = (from - grid_origin + period - 1) / period;
  for (TimestampMs ts = grid_origin + k0 * period; ts < to; ts += period) {
    if (noise.dropout_prob > 0 && unit(rng) < noise.dropout_prob) continue;
    auto v = motion_value(basic, ts - entry_start);
    if (noise.gaussian_sigma > 0) {
      for (auto& a : v) a += gauss(rng);
    }
    out.samples.push_back({ts, v[0], v[1], v[2], std::nullopt});
  }
}

}  // namespace

std::int64_t Script::day_count() const noexcept {
  return entries.empty() ? 0 : (end_ms() - 1) / kDayMs + 1;
}

Script parse_script(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  Script s;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kScriptHeader) throw ParseError(src, ln + 1, "missing script header");
      header = true;
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 5) throw ParseError(src, ln + 1, "expected 5 fields");
    ScheduleEntry e;
    try {
      e.start_ms = parse_script_clock(f[0]);
      const double dur_s = io::parse_double(f[1]);
      e.duration_ms = std::llround(dur_s * 1000.0);
    } catch (const Error& err) {
      throw ParseError(src, ln + 1, err.what());
    }
    if (e.duration_ms <= 0) throw ParseError(src, ln + 1, "duration must be positive");
    const auto room = parse_room(f[2]);
    if (!room) throw ParseError(src, ln + 1, "unknown room '" + f[2] + "'");
    e.room = *room;
    const auto basic = parse_basic(f[3]);
    if (!basic) throw ParseError(src, ln + 1, "unknown basic activity '" + f[3] + "'");
    if (*basic == BasicActivity::Sleep) throw ParseError(src, ln + 1, "sleep is derived; script lie instead");
    e.basic = *basic;
    const auto apps = io::trim(f[4]);
    if (!apps.empty() && apps != "-") {
      for (const auto& a : io::split(apps, '|')) {
        const std::string name(io::trim(a));
        if (!is_appliance(name)) throw ParseError(src, ln + 1, "unknown appliance '" + name + "'");
        e.appliances.insert(name);
      }
    }
    if (!s.entries.empty() && e.start_ms < s.entries.back().end_ms()) {
      throw ParseError(src, ln + 1, "overlapping entries");
    }
    s.entries.push_back(std::move(e));
  }
  if (!header) throw ParseError(src, 0, "missing script header");
  return s;
}

Script read_script(const std::filesystem::path& path) { return parse_script(io::read_lines(path), path.string()); }

std::string format_script(const Script& script) {
  std::string out(kScriptHeader);
  out += '\n';
  for (const auto& e : script.entries) {
    std::string apps;
    for (const auto& a : e.appliances) apps += (apps.empty() ? "" : "|") + a;
    out += format_script_clock(e.start_ms) + "," + io::format_double(static_cast<double>(e.duration_ms) / 1000.0) +
           "," + std::string(room_token(e.room)) + "," + std::string(to_string(e.basic)) + "," + apps + "\n";
  }
  return out;
}

void NoiseSpec::validate() const {
  if (!(gaussian_sigma >= 0.0) || !std::isfinite(gaussian_sigma)) throw Error("gaussian_sigma must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) throw Error("dropout_prob must be in [0, 1)");
}

std::array<double, 3> motion_value(BasicActivity basic, std::int64_t t_ms) {
  const double t = static_cast<double>(t_ms) / 1000.0;
  auto wave = [t](double hz, double amp) { return amp * std::sin(2.0 * std::numbers::pi * hz * t); };
  switch (basic) {
    case BasicActivity::Stand: return {0.0, kGravity, 0.0};
    case BasicActivity::Sit: return {0.0, 3.0, 9.34};
    case BasicActivity::Lie:
    case BasicActivity::Sleep: return {kGravity, 0.0, 0.0};
    case BasicActivity::Walk: return {0.0, kGravity + wave(2.0, 3.0), 0.0};
    case BasicActivity::Jog: return {0.0, kGravity + wave(3.0, 6.0), 0.0};
    case BasicActivity::StairUp: return {0.0, 9.0 + wave(2.0, 3.0), 3.9};
    case BasicActivity::StairDown: return {0.0, 9.0 + wave(2.0, 4.0), -3.9};
  }
  return {0.0, 0.0, 0.0};
}

SampleSeries synth_motion(BasicActivity basic, std::int64_t duration_ms, std::int64_t period_ms,
                          const NoiseSpec& noise, TimestampMs start_ts) {
  noise.validate();
  if (period_ms <= 0) throw Error("period must be positive");
  SampleSeries out;
  out.nominal_period_ms = period_ms;
  std::mt19937_64 rng(noise.seed);
  emit_samples(out, basic, start_ts, start_ts, start_ts + duration_ms, start_ts, period_ms, noise, rng);
  return out;
}

SampleSeries simulate_day_inertial(const Script& script, std::int64_t day, const SimConfig& config) {
  config.noise.validate();
  SampleSeries out;
  out.subject_id = config.subject_id;
  out.nominal_period_ms = config.period_ms;
  const std::int64_t day_from = day * kDayMs;
  const std::int64_t day_to = day_from + kDayMs;
  auto rng = day_engine(config.noise.seed, day);
  for (const auto& e : script.entries) {
    const auto from = std::max(e.start_ms, day_from);
    const auto to = std::min(e.end_ms(), day_to);
    if (from >= to) continue;
    emit_samples(out, e.basic, config.origin_ts + e.start_ms, config.origin_ts + from, config.origin_ts + to,
                 config.origin_ts, config.period_ms, config.noise, rng);
  }
  return out;
}

SampleSeries simulate_inertial(const Script& script, const SimConfig& config) {
  SampleSeries out;
  out.subject_id = config.subject_id;
  out.nominal_period_ms = config.period_ms;
  for (std::int64_t d = 0; d < script.day_count(); ++d) {
    auto day = simulate_day_inertial(script, d, config);
    out.samples.insert(out.samples.end(), day.samples.begin(), day.samples.end());
  }
  return out;
}

std::vector<AmbientEvent> simulate_events(const Script& script, const SimConfig& config) {
  std::vector<std::vector<AmbientEvent>> streams;
  for (const auto room : kAllRooms) {
    if (room == RoomId::Outside) continue;
    const auto addr = make_address(SensorKind::pir, room_token(room));
    std::vector<AmbientEvent> s;
    for (const auto& r : runs(script, [room](const ScheduleEntry& e) { return e.room == room; })) {
      s.push_back({config.origin_ts + r.start, addr, 1});
      s.push_back({config.origin_ts + r.end, addr, 0});
    }
    streams.push_back(std::move(s));
  }
  for (const auto& name : scripted_appliances(script)) {
    const auto addr = appliance_address(name);
    std::vector<AmbientEvent> s;
    for (const auto& r : runs(script, [&name](const ScheduleEntry& e) { return e.appliances.contains(name); })) {
      s.push_back({config.origin_ts + r.start, addr, 1});
      s.push_back({config.origin_ts + r.end, addr, 0});
    }
    streams.push_back(std::move(s));
  }
  return merge_streams(streams);
}

OccupancyResult scripted_occupancy(const Script& script, const SimConfig& config) {
  OccupancyResult out;
  for (const auto room : kAllRooms) {
    if (room == RoomId::Outside) continue;
    for (const auto& r : runs(script, [room](const ScheduleEntry& e) { return e.room == room; })) {
      out.rooms.push_back({room, config.origin_ts + r.start, config.origin_ts + r.end, false});
    }
  }
  std::sort(out.rooms.begin(), out.rooms.end(),
            [](const OccupancyInterval& a, const OccupancyInterval& b) { return a.start_ts < b.start_ts; });
  for (const auto& name : scripted_appliances(script)) {
    for (const auto& r : runs(script, [&name](const ScheduleEntry& e) { return e.appliances.contains(name); })) {
      out.appliances.push_back({name, config.origin_ts + r.start, config.origin_ts + r.end, false});
    }
  }
  std::sort(out.appliances.begin(), out.appliances.end(), [](const ApplianceInterval& a, const ApplianceInterval& b) {
    return std::tie(a.start_ts, a.appliance) < std::tie(b.start_ts, b.appliance);
  });
  return out;
}

std::vector<BasicTick> truth_basic_ticks(const Script& script, const SimConfig& config) {
  std::vector<BasicTick> ticks;
  for (const auto& e : script.entries) {
    const TimestampMs from = config.origin_ts + e.start_ms;
    const TimestampMs to = config.origin_ts + e.end_ms();
    TimestampMs t = from - ((from % kTickMs) + kTickMs) % kTickMs;
    if (t < from) t += kTickMs;
    for (; t < to; t += kTickMs) ticks.push_back({t, e.basic});
  }
  return derive_sleep(ticks);
}

std::vector<DerivedTick> truth_timeline(const Script& script, const SimConfig& config, const FusionRuleTable& rules) {
  return fuse_timeline(truth_basic_ticks(script, config), scripted_occupancy(script, config), rules);
}

Script calibration_script() {
  const std::pair<BasicActivity, RoomId> plan[] = {
      {BasicActivity::Walk, RoomId::Hall},        {BasicActivity::Jog, RoomId::Outside},
      {BasicActivity::Sit, RoomId::Hall},         {BasicActivity::Stand, RoomId::Kitchen},
      {BasicActivity::Lie, RoomId::Bedroom},      {BasicActivity::StairUp, RoomId::Stairs},
      {BasicActivity::StairDown, RoomId::Stairs},
  };
  constexpr std::int64_t kSpan = 10 * 60 * 1000;
  Script s;
  std::int64_t t = 8 * 60 * 60 * 1000;
  for (const auto& [basic, room] : plan) {
    s.entries.push_back({t, kSpan, room, basic, {}});
    t += kSpan;
  }
  return s;
}

}  // namespace ambiact::sim
