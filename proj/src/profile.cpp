#include "ambiact/profile.hpp"

#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t TimeZone::day_index(TimestampMs ts) const noexcept { return floor_div(ts + offset_ms(), kDayMs); }

std::int64_t TimeZone::time_of_day(TimestampMs ts) const noexcept {
  return ts + offset_ms() - day_index(ts) * kDayMs;
}

std::string format_date(std::int64_t day_index) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day_index}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_clock(std::int64_t ms_of_day) {
  const std::int64_t s = ms_of_day / 1000;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                static_cast<long long>(s / 60 % 60), static_cast<long long>(s % 60));
  return buf;
}

std::int64_t parse_clock(std::string_view text) {
  const auto parts = io::split(io::trim(text), ':');
  if (parts.size() != 2 && parts.size() != 3) throw Error("invalid clock time '" + std::string(text) + "'");
  const auto h = io::parse_int(parts[0]);
  const auto m = io::parse_int(parts[1]);
  const auto s = parts.size() == 3 ? io::parse_int(parts[2]) : 0;
  if (h < 0 || m < 0 || m > 59 || s < 0 || s > 59) throw Error("invalid clock time '" + std::string(text) + "'");
  const std::int64_t ms = ((h * 60 + m) * 60 + s) * 1000;
  if (ms > kDayMs) throw Error("invalid clock time '" + std::string(text) + "'");
  return ms;
}

std::vector<Bout> bouts(std::span<const WindowLabel> windows) {
  std::vector<Bout> out;
  bool open = false;
  for (const auto& w : windows) {
    if (w.label == kNoDataLabel) {
      open = false;
      continue;
    }
    if (open && out.back().label == w.label && out.back().end_ts == w.start_ts) {
      out.back().end_ts = w.end_ts;
    } else {
      out.push_back({w.label, w.start_ts, w.end_ts});
      open = true;
    }
  }
  return out;
}

double DayProfile::share_pct(const std::string& label) const {
  if (coverage_ms == 0) return 0.0;
  const std::int64_t d = label == kNoDataLabel ? nodata_ms : (duration_ms.contains(label) ? duration_ms.at(label) : 0);
  return 100.0 * static_cast<double>(d) / static_cast<double>(coverage_ms);
}

DayProfile day_profile(std::span<const WindowLabel> windows, const TimeZone& tz) {
  DayProfile p;
  if (windows.empty()) return p;
  p.day = tz.day_index(windows.front().start_ts);
  for (const auto& w : windows) {
    if (tz.day_index(w.start_ts) != p.day || tz.day_index(w.end_ts - 1) != p.day) {
      throw Error("split at day boundary first");
    }
    const std::int64_t span = w.end_ts - w.start_ts;
    p.coverage_ms += span;
    if (w.label == kNoDataLabel) {
      p.nodata_ms += span;
    } else {
      p.duration_ms[w.label] += span;
    }
  }
  for (const auto& b : bouts(windows)) ++p.bout_count[b.label];
  return p;
}

std::vector<std::vector<WindowLabel>> split_by_day(std::span<const WindowLabel> windows, const TimeZone& tz) {
  std::vector<std::vector<WindowLabel>> out;
  std::int64_t current = 0;
  for (const auto& w : windows) {
    const auto d = tz.day_index(w.start_ts);
    if (out.empty() || d != current) {
      out.emplace_back();
      current = d;
    }
    out.back().push_back(w);
  }
  return out;
}

std::vector<DayProfile> profile_days(std::span<const WindowLabel> windows, const TimeZone& tz) {
  std::vector<DayProfile> out;
  for (const auto& day : split_by_day(windows, tz)) out.push_back(day_profile(day, tz));
  return out;
}

WeekProfile week_profile(std::span<const DayProfile> days) {
  if (days.size() != 7) throw Error("week profile needs 7 days, got " + std::to_string(days.size()));
  for (std::size_t d = 1; d < days.size(); ++d) {
    if (days[d].day != days[d - 1].day + 1) throw Error("week profile days are not consecutive");
  }
  WeekProfile w;
  w.days.assign(days.begin(), days.end());
  for (const auto& day : days) {
    for (const auto& [label, ms] : day.duration_ms) w.occurrence.try_emplace(label, std::array<bool, 7>{});
  }
  for (std::size_t d = 0; d < 7; ++d) {
    for (auto& [label, occ] : w.occurrence) {
      const auto it = days[d].duration_ms.find(label);
      occ[d] = it != days[d].duration_ms.end() && it->second > 0;
    }
  }
  return w;
}

IntervalStats interval_query(std::span<const WindowLabel> windows, std::int64_t from_ms, std::int64_t to_ms,
                             std::string_view label, const TimeZone& tz) {
  if (from_ms > to_ms) throw Error("inverted time range");
  std::vector<WindowLabel> hits;
  for (const auto& w : windows) {
    const auto tod = tz.time_of_day(w.start_ts);
    if (tod >= from_ms && tod < to_ms && w.label == label) hits.push_back(w);
  }
  IntervalStats s;
  for (const auto& b : bouts(hits)) {
    ++s.bouts;
    s.duration_ms += b.end_ts - b.start_ts;
  }
  return s;
}

namespace {

nlohmann::ordered_json day_json(const DayProfile& p, bool human) {
  nlohmann::ordered_json j;
  j["date"] = p.date();
  j["coverage_ms"] = p.coverage_ms;
  j["nodata_ms"] = p.nodata_ms;
  auto acts = nlohmann::ordered_json::array();
  for (const auto& [label, ms] : p.duration_ms) {
    nlohmann::ordered_json a;
    a["label"] = label;
    a["duration_ms"] = ms;
    if (human) a["duration"] = format_clock(ms);
    a["share_pct"] = p.share_pct(label);
    a["bouts"] = p.bout_count.contains(label) ? p.bout_count.at(label) : 0;
    acts.push_back(std::move(a));
  }
  j["activities"] = std::move(acts);
  return j;
}

bool consecutive_week(std::span<const DayProfile> days) {
  if (days.size() != 7) return false;
  for (std::size_t d = 1; d < days.size(); ++d) {
    if (days[d].day != days[d - 1].day + 1) return false;
  }
  return true;
}

}  // namespace

std::string profile_json(std::span<const DayProfile> days, bool human_readable) {
  nlohmann::ordered_json root;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : days) arr.push_back(day_json(d, human_readable));
  root["days"] = std::move(arr);
  if (consecutive_week(days)) {
    const auto week = week_profile(days);
    nlohmann::ordered_json occ;
    for (const auto& [label, flags] : week.occurrence) occ[label] = flags;
    root["week"] = {{"first_date", days.front().date()}, {"occurrence", std::move(occ)}};
  }
  return root.dump(2) + "\n";
}

std::string profile_csv(std::span<const DayProfile> days) {
  std::string out = "date,label,duration_ms,share_pct,bouts\n";
  for (const auto& p : days) {
    const auto date = p.date();
    for (const auto& [label, ms] : p.duration_ms) {
      const auto b = p.bout_count.contains(label) ? p.bout_count.at(label) : 0;
      out += date + "," + label + "," + std::to_string(ms) + "," + io::format_double(p.share_pct(label)) + "," +
             std::to_string(b) + "\n";
    }
    if (p.nodata_ms > 0) {
      out += date + "," + std::string(kNoDataLabel) + "," + std::to_string(p.nodata_ms) + "," +
             io::format_double(p.share_pct(std::string(kNoDataLabel))) + ",0\n";
    }
  }
  return out;
}

}  // namespace ambiact
