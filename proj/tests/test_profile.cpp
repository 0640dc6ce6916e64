#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "ambiact/error.hpp"
#include "ambiact/profile.hpp"

using namespace ambiact;

namespace {

constexpr TimestampMs kDay0 = 1704067200000;  // 2024-01-01 00:00 UTC
constexpr std::int64_t kWin = 120000;

std::vector<WindowLabel> windows(TimestampMs start, const std::vector<std::string>& labels) {
  std::vector<WindowLabel> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const TimestampMs s = start + static_cast<TimestampMs>(i) * kWin;
    out.push_back({s, s + kWin, labels[i],
                   labels[i] == kNoDataLabel ? LabelMethod::none : LabelMethod::frequency});
  }
  return out;
}

// Straightforward reference: one pass counting label changes.
std::map<std::string, std::size_t> naive_bouts(const std::vector<WindowLabel>& w) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].label == kNoDataLabel) continue;
    const bool continues = i > 0 && w[i - 1].label == w[i].label && w[i - 1].end_ts == w[i].start_ts;
    if (!continues) ++out[w[i].label];
  }
  return out;
}

}  // namespace

TEST(Clock, FormatAndParse) {
  EXPECT_EQ(format_date(TimeZone{}.day_index(kDay0)), "2024-01-01");
  EXPECT_EQ(format_clock(3723000), "01:02:03");
  EXPECT_EQ(parse_clock("07:10"), 25800000);
  EXPECT_EQ(parse_clock("24:00"), kDayMs);
  EXPECT_THROW(parse_clock("25:00"), Error);
  EXPECT_THROW(parse_clock("7h"), Error);
  const TimeZone ist{330};
  EXPECT_EQ(ist.day_index(kDay0 - 19800000), ist.day_index(kDay0 - 19800000 + kDayMs - 1));
  EXPECT_EQ(ist.time_of_day(ist.midnight(ist.day_index(kDay0))), 0);
  EXPECT_EQ(TimeZone{}.day_index(-1), -1);
}

TEST(Bouts, Examples) {
  const auto w = windows(kDay0, {"W", "W", "S", "W"});
  const auto b = bouts(w);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], (Bout{"W", kDay0, kDay0 + 2 * kWin}));
  EXPECT_EQ(b[1].label, "S");
  auto gappy = windows(kDay0, {"W", kNoDataLabel.data(), "W"});
  EXPECT_EQ(bouts(gappy).size(), 2u);
}

TEST(Bouts, MatchNaiveScanner) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> pool = {"a", "b", std::string(kNoDataLabel)};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> labels(1 + rng() % 60);
    for (auto& l : labels) l = pool[rng() % pool.size()];
    auto w = windows(kDay0, labels);
    // random holes in time
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (rng() % 10 == 0) {
        for (std::size_t j = i; j < w.size(); ++j) {
          w[j].start_ts += kWin;
          w[j].end_ts += kWin;
        }
      }
    }
    std::map<std::string, std::size_t> got;
    for (const auto& b : bouts(w)) ++got[b.label];
    EXPECT_EQ(got, naive_bouts(w));
  }
}

TEST(DayProfile, SleepShareAndConservation) {
  std::vector<std::string> labels(720, "Walking in Hall");
  for (int i = 0; i < 180; ++i) labels[static_cast<std::size_t>(i)] = "Sleeping in Bedroom";
  labels[400] = std::string(kNoDataLabel);
  const auto w = windows(kDay0, labels);
  const auto p = day_profile(w);
  EXPECT_EQ(p.date(), "2024-01-01");
  EXPECT_EQ(p.coverage_ms, kDayMs);
  EXPECT_DOUBLE_EQ(p.share_pct("Sleeping in Bedroom"), 25.0);
  std::int64_t total = p.nodata_ms;
  for (const auto& [label, ms] : p.duration_ms) total += ms;
  EXPECT_EQ(total, p.coverage_ms);
  EXPECT_EQ(p.bout_count.at("Walking in Hall"), 2u);
  EXPECT_EQ(p.nodata_ms, kWin);
}

TEST(DayProfile, RejectsWindowsAcrossMidnight) {
  const auto w = windows(kDay0 - kWin, {"a", "a"});
  EXPECT_THROW(day_profile(w), Error);
  EXPECT_EQ(profile_days(w).size(), 2u);
}

TEST(WeekProfile, Occurrence) {
  std::vector<DayProfile> days;
  for (int d = 0; d < 7; ++d) {
    std::vector<std::string> labels = {"Walking in Hall"};
    if (d % 2 == 0) labels.push_back("Outside Activity");
    days.push_back(day_profile(windows(kDay0 + d * kDayMs, labels)));
  }
  const auto w = week_profile(days);
  EXPECT_EQ(w.occurrence.at("Walking in Hall"), (std::array<bool, 7>{true, true, true, true, true, true, true}));
  EXPECT_EQ(w.occurrence.at("Outside Activity"), (std::array<bool, 7>{true, false, true, false, true, false, true}));
  EXPECT_THROW(week_profile(std::span(days).first(6)), Error);
  auto skipped = days;
  skipped[6].day += 1;
  EXPECT_THROW(week_profile(skipped), Error);

  const auto j = nlohmann::json::parse(profile_json(days));
  EXPECT_EQ(j["days"].size(), 7u);
  EXPECT_TRUE(j.contains("week"));
  EXPECT_FALSE(nlohmann::json::parse(profile_json(std::span(days).first(3))).contains("week"));
}

TEST(IntervalQuery, MorningDrinks) {
  std::vector<std::string> labels(360, "Sitting in Hall");  // 00:00 to 12:00
  for (const char* t : {"07:10", "08:40", "09:30", "10:20"}) {
    labels[static_cast<std::size_t>(parse_clock(t) / kWin)] = "Drinking Activity";
  }
  const auto w = windows(kDay0, labels);
  EXPECT_EQ(interval_query(w, parse_clock("06:00"), parse_clock("12:00"), "Drinking Activity"),
            (IntervalStats{4, 4 * kWin}));
  EXPECT_EQ(interval_query(w, parse_clock("08:00"), parse_clock("09:00"), "Drinking Activity").bouts, 1u);
  EXPECT_EQ(interval_query(w, parse_clock("11:00"), parse_clock("11:00"), "Drinking Activity").bouts, 0u);
  EXPECT_THROW(interval_query(w, parse_clock("12:00"), parse_clock("06:00"), "Drinking Activity"), Error);
}

TEST(Report, CsvRows) {
  const auto p = day_profile(windows(kDay0, {"a", "a", std::string(kNoDataLabel), "b"}));
  const std::vector<DayProfile> days = {p};
  EXPECT_EQ(profile_csv(days),
            "date,label,duration_ms,share_pct,bouts\n"
            "2024-01-01,a,240000,50,1\n"
            "2024-01-01,b,120000,25,1\n"
            "2024-01-01,NoData,120000,25,0\n");
}
