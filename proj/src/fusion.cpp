#include "ambiact/fusion.hpp"

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

namespace {

constexpr std::array<std::string_view, 8> kBasicNames = {"walk", "jog",   "sit",     "stand",
                                                         "lie",  "sleep", "stairUp", "stairDown"};
constexpr std::array<std::string_view, 3> kFlagNames = {"Normal", "Unnatural", "Anomaly"};

}  // namespace

std::string_view to_string(BasicActivity a) { return kBasicNames[static_cast<std::size_t>(a)]; }

std::optional<BasicActivity> parse_basic(std::string_view text) {
  const std::string key = io::normalize_key(text);
  for (std::size_t i = 0; i < kBasicNames.size(); ++i) {
    if (key == io::normalize_key(kBasicNames[i])) return static_cast<BasicActivity>(i);
  }
  static const std::pair<std::string_view, BasicActivity> aliases[] = {
      {"walking", BasicActivity::Walk},       {"jogging", BasicActivity::Jog},
      {"sitting", BasicActivity::Sit},        {"standing", BasicActivity::Stand},
      {"lying", BasicActivity::Lie},          {"sleeping", BasicActivity::Sleep},
      {"upstairs", BasicActivity::StairUp},   {"downstairs", BasicActivity::StairDown},
      {"stair up", BasicActivity::StairUp},   {"stair down", BasicActivity::StairDown},
      {"stair_up", BasicActivity::StairUp},   {"stair_down", BasicActivity::StairDown}};
  for (const auto& [name, a] : aliases) {
    if (key == name) return a;
  }
  return std::nullopt;
}

std::string_view to_string(ActivityFlag f) { return kFlagNames[static_cast<std::size_t>(f)]; }

std::optional<ActivityFlag> parse_flag(std::string_view text) {
  const std::string key = io::normalize_key(text);
  for (std::size_t i = 0; i < kFlagNames.size(); ++i) {
    if (key == io::normalize_key(kFlagNames[i])) return static_cast<ActivityFlag>(i);
  }
  return std::nullopt;
}

FusionRuleTable::FusionRuleTable(std::vector<FusionRule> rules, DerivedActivity fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {
  for (const auto& r : rules_) {
    if (!r.appliance.empty() && !is_appliance(r.appliance)) {
      throw Error("unknown appliance '" + r.appliance + "' in fusion rule");
    }
  }
}

DerivedActivity FusionRuleTable::fuse(std::optional<BasicActivity> basic, RoomId room,
                                      const std::set<std::string>& appliances) const {
  const FusionRule* best = nullptr;
  int best_score = -1;
  for (const auto& r : rules_) {
    if (r.basic && r.basic != basic) continue;
    if (r.room && *r.room != room) continue;
    if (!r.appliance.empty() && !appliances.contains(r.appliance)) continue;
    const int score = (r.appliance.empty() ? 0 : 4) + (r.basic ? 1 : 0) + (r.room ? 1 : 0);
    if (score > best_score) {
      best = &r;
      best_score = score;
    }
  }
  return best ? best->result : fallback_;
}

FusionRuleTable parse_rules(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  std::vector<FusionRule> rules;
  DerivedActivity fallback{"Unknown", ActivityFlag::Unnatural};
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::split(line, ',');
    if (!header) {
      if (line != "basic,room,appliance,derived_name,flag") throw ParseError(src, ln + 1, "missing rule header");
      header = true;
      continue;
    }
    if (f.size() != 5) throw ParseError(src, ln + 1, "expected 5 fields, got " + std::to_string(f.size()));
    const auto flag = parse_flag(f[4]);
    if (!flag) throw ParseError(src, ln + 1, "unknown flag '" + f[4] + "'");
    const std::string name(io::trim(f[3]));
    if (name.empty()) throw ParseError(src, ln + 1, "empty derived_name");
    const std::string basic_text(io::trim(f[0]));
    if (basic_text == "default") {
      fallback = {name, *flag};
      continue;
    }
    FusionRule rule;
    rule.result = {name, *flag};
    if (basic_text != "-" && basic_text != "*") {
      rule.basic = parse_basic(basic_text);
      if (!rule.basic) throw ParseError(src, ln + 1, "unknown basic activity '" + basic_text + "'");
    }
    const std::string room_text(io::trim(f[1]));
    if (room_text != "*" && !room_text.empty()) {
      rule.room = parse_room(room_text);
      if (!rule.room) throw ParseError(src, ln + 1, "unknown room '" + room_text + "'");
    }
    rule.appliance = std::string(io::trim(f[2]));
    if (!rule.appliance.empty() && !is_appliance(rule.appliance)) {
      throw ParseError(src, ln + 1, "unknown appliance '" + rule.appliance + "'");
    }
    rules.push_back(std::move(rule));
  }
  if (!header) throw ParseError(src, 0, "missing rule header");
  return FusionRuleTable(std::move(rules), std::move(fallback));
}

FusionRuleTable read_rules(const std::filesystem::path& path) {
  return parse_rules(io::read_lines(path), path.string());
}

std::string format_rules(const FusionRuleTable& table) {
  std::string out = "basic,room,appliance,derived_name,flag\n";
  for (const auto& r : table.rules()) {
    out += r.basic ? std::string(to_string(*r.basic)) : std::string("-");
    out += ',';
    out += r.room ? std::string(room_token(*r.room)) : std::string("*");
    out += ',' + r.appliance + ',' + r.result.name + ',' + std::string(to_string(r.result.flag)) + '\n';
  }
  const DerivedActivity standard{"Unknown", ActivityFlag::Unnatural};
  if (table.fallback() != standard) {
    out += "default,,," + table.fallback().name + "," + std::string(to_string(table.fallback().flag)) + "\n";
  }
  return out;
}

std::vector<BasicTick> derive_sleep(std::span<const BasicTick> timeline, std::int64_t min_still_ms,
                                    std::int64_t tick_ms) {
  std::vector<BasicTick> out(timeline.begin(), timeline.end());
  std::size_t i = 0;
  while (i < out.size()) {
    if (out[i].basic != BasicActivity::Lie) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < out.size() && out[j].basic == BasicActivity::Lie && out[j].ts - out[j - 1].ts <= tick_ms) ++j;
    if (out[j - 1].ts + tick_ms - out[i].ts >= min_still_ms) {
      for (std::size_t k = i; k < j; ++k) out[k].basic = BasicActivity::Sleep;
    }
    i = j;
  }
  return out;
}

std::vector<DerivedTick> fuse_timeline(std::span<const BasicTick> ticks, const OccupancyResult& context,
                                       const FusionRuleTable& rules) {
  std::vector<DerivedTick> out;
  out.reserve(ticks.size());
  for (const auto& t : ticks) {
    const RoomId room = locate(t.ts, context.rooms);
    out.push_back({t.ts, rules.fuse(t.basic, room, active_appliances(t.ts, context.appliances))});
  }
  return out;
}

std::vector<FlagRun> flag_stream(std::span<const DerivedTick> timeline, std::int64_t tick_ms) {
  std::vector<FlagRun> runs;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto flag = timeline[i].activity.flag;
    if (flag == ActivityFlag::Normal) continue;
    const bool extends = !runs.empty() && i > 0 && runs.back().flag == flag &&
                         timeline[i - 1].activity.flag == flag && timeline[i].ts - timeline[i - 1].ts <= tick_ms;
    if (extends) {
      runs.back().end_ts = timeline[i].ts + tick_ms;
    } else {
      runs.push_back({timeline[i].ts, timeline[i].ts + tick_ms, flag});
    }
  }
  return runs;
}

std::string format_timeline(std::span<const DerivedTick> timeline) {
  std::string out = "ts,derived_name,flag\n";
  for (const auto& t : timeline) {
    out += std::to_string(t.ts) + "," + t.activity.name + "," + std::string(to_string(t.activity.flag)) + "\n";
  }
  return out;
}

std::vector<DerivedTick> parse_timeline(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  std::vector<DerivedTick> out;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty()) continue;
    if (!header) {
      if (line != "ts,derived_name,flag") throw ParseError(src, ln + 1, "missing timeline header");
      header = true;
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 3) throw ParseError(src, ln + 1, "expected 3 fields");
    DerivedTick t;
    try {
      t.ts = io::parse_int(f[0]);
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
    const auto flag = parse_flag(f[2]);
    if (!flag) throw ParseError(src, ln + 1, "unknown flag '" + f[2] + "'");
    t.activity = {f[1], *flag};
    if (!out.empty() && t.ts <= out.back().ts) throw ParseError(src, ln + 1, "timeline not strictly ordered by ts");
    out.push_back(std::move(t));
  }
  if (!header) throw ParseError(src, 0, "missing timeline header");
  return out;
}

std::vector<DerivedTick> read_timeline(const std::filesystem::path& path) {
  return parse_timeline(io::read_lines(path), path.string());
}

}  // namespace ambiact
