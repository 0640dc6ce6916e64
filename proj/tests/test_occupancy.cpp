#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ambiact/occupancy.hpp"

using namespace ambiact;

namespace {

std::vector<AmbientEvent> pir(std::string_view room, std::vector<std::pair<TimestampMs, int>> ev) {
  std::vector<AmbientEvent> out;
  for (auto [ts, st] : ev) out.push_back({ts, make_address(SensorKind::pir, room), st});
  return out;
}

using Span = std::pair<TimestampMs, TimestampMs>;

std::vector<Span> spans(const std::vector<OccupancyInterval>& v) {
  std::vector<Span> out;
  for (const auto& i : v) out.emplace_back(i.start_ts, i.end_ts);
  return out;
}

}  // namespace

TEST(DetectRoom, Examples) {
  EXPECT_EQ(spans(detect_room_intervals(pir("bedroom", {{100, 1}, {400, 0}}))), (std::vector<Span>{{100, 400}}));
  EXPECT_EQ(spans(detect_room_intervals(pir("bedroom", {{100, 1}, {200, 1}, {400, 0}}))),
            (std::vector<Span>{{100, 400}}));
  EXPECT_TRUE(detect_room_intervals(pir("bedroom", {{100, 0}})).empty());
}

TEST(DetectRoom, OpenAtEndIsTruncated) {
  const auto v = detect_room_intervals(pir("hall", {{100, 1}, {300, 1}}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].end_ts, 300);
  EXPECT_TRUE(v[0].truncated);
  DetectorOptions opt;
  opt.stream_end_ts = 900;
  EXPECT_EQ(detect_room_intervals(pir("hall", {{100, 1}}), opt)[0].end_ts, 900);
}

TEST(DetectRoom, InactivityTimeout) {
  DetectorOptions opt;
  opt.inactivity_timeout_ms = 1000;
  const auto v = detect_room_intervals(pir("hall", {{0, 1}, {500, 1}, {5000, 1}, {5200, 0}}), opt);
  EXPECT_EQ(spans(v), (std::vector<Span>{{0, 1500}, {5000, 5200}}));
}

TEST(DetectRoom, CountEqualsRisingEdges) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<TimestampMs, int>> ev;
    TimestampMs ts = 0;
    int state = 0, rising = 0;
    for (int i = 0; i < 30; ++i) {
      ts += 1 + static_cast<TimestampMs>(rng() % 100);
      const int v = static_cast<int>(rng() % 2);
      if (v == 1 && state == 0) ++rising;
      state = v;
      ev.emplace_back(ts, v);
    }
    DetectorOptions opt;
    opt.stream_end_ts = ts + 1;  // keep a final rising edge from collapsing to nothing
    EXPECT_EQ(detect_room_intervals(pir("kitchen", ev), opt).size(), static_cast<std::size_t>(rising));
  }
}

TEST(Resolve, Examples) {
  std::map<RoomId, std::vector<OccupancyInterval>> in;
  in[RoomId::Bedroom] = {{RoomId::Bedroom, 0, 600, false}};
  in[RoomId::Kitchen] = {{RoomId::Kitchen, 300, 500, false}};
  const auto r = resolve_single_person(in);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (OccupancyInterval{RoomId::Bedroom, 0, 300, false}));
  EXPECT_EQ(r[1], (OccupancyInterval{RoomId::Kitchen, 300, 500, false}));

  std::map<RoomId, std::vector<OccupancyInterval>> disjoint;
  disjoint[RoomId::Hall] = {{RoomId::Hall, 0, 10, false}, {RoomId::Hall, 50, 60, false}};
  disjoint[RoomId::Worship] = {{RoomId::Worship, 20, 40, false}};
  const auto d = resolve_single_person(disjoint);
  EXPECT_EQ(spans(d), (std::vector<Span>{{0, 10}, {20, 40}, {50, 60}}));

  std::map<RoomId, std::vector<OccupancyInterval>> tie;
  tie[RoomId::Bedroom] = {{RoomId::Bedroom, 100, 200, false}};
  tie[RoomId::Kitchen] = {{RoomId::Kitchen, 100, 300, false}};
  const auto t = resolve_single_person(tie);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].room, RoomId::Kitchen);
}

TEST(Resolve, FuzzedInputsBecomeDisjoint) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    std::map<RoomId, std::vector<OccupancyInterval>> in;
    for (auto room : kAllRooms) {
      if (room == RoomId::Outside) continue;
      TimestampMs t = static_cast<TimestampMs>(rng() % 50);
      for (int i = 0; i < 5; ++i) {
        const TimestampMs s = t + static_cast<TimestampMs>(rng() % 40);
        const TimestampMs e = s + 1 + static_cast<TimestampMs>(rng() % 80);
        in[room].push_back({room, s, e, false});
        t = e;
      }
    }
    const auto r = resolve_single_person(in);
    for (std::size_t i = 0; i < r.size(); ++i) {
      ASSERT_LT(r[i].start_ts, r[i].end_ts);
      if (i > 0) ASSERT_LE(r[i - 1].start_ts, r[i].start_ts);
      for (std::size_t j = i + 1; j < r.size(); ++j) {
        ASSERT_TRUE(r[i].end_ts <= r[j].start_ts || r[j].end_ts <= r[i].start_ts);
      }
    }
  }
}

TEST(Appliance, Examples) {
  const auto tv = make_address(SensorKind::relay, "tv");
  const std::vector<AmbientEvent> on_off = {{0, tv, 1}, {1800000, tv, 0}};
  const auto v = appliance_intervals(on_off);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].end_ts - v[0].start_ts, 1800000);
  const auto bottle = make_address(SensorKind::force, "water_bottle");
  const std::vector<AmbientEvent> blip = {{5000, bottle, 1}, {15000, bottle, 0}};
  EXPECT_EQ(appliance_intervals(blip)[0].end_ts - appliance_intervals(blip)[0].start_ts, 10000);
  EXPECT_TRUE(appliance_intervals(std::vector<AmbientEvent>{}).empty());
}

TEST(Locate, HalfOpen) {
  const std::vector<OccupancyInterval> r = {{RoomId::Bedroom, 0, 100, false}, {RoomId::Hall, 100, 200, false},
                                            {RoomId::Kitchen, 300, 400, false}};
  EXPECT_EQ(locate(50, r), RoomId::Bedroom);
  EXPECT_EQ(locate(100, r), RoomId::Hall);
  EXPECT_EQ(locate(250, r), RoomId::Outside);
  EXPECT_EQ(locate(400, r), RoomId::Outside);
  EXPECT_EQ(locate(-5, r), RoomId::Outside);
}

TEST(Reconstruct, IntervalCsvRoundTrip) {
  std::vector<AmbientEvent> ev;
  for (auto& e : pir("bedroom", {{0, 1}, {100, 0}})) ev.push_back(e);
  for (auto& e : pir("kitchen", {{100, 1}, {250, 0}})) ev.push_back(e);
  ev.push_back({120, make_address(SensorKind::relay, "tv"), 1});
  ev.push_back({300, make_address(SensorKind::pir, "hall"), 1});
  std::stable_sort(ev.begin(), ev.end(), event_before);
  DetectorOptions opt;
  opt.stream_end_ts = 500;
  const auto r = reconstruct_occupancy(ev, opt);
  ASSERT_EQ(r.rooms.size(), 3u);
  EXPECT_TRUE(r.rooms[2].truncated);
  ASSERT_EQ(r.appliances.size(), 1u);
  EXPECT_EQ(r.appliances[0].end_ts, 500);
  EXPECT_EQ(reconstruct_occupancy(ev).rooms.size(), 2u);  // an open interval with no duration is dropped
  const auto text = format_intervals(r);
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  const auto back = parse_intervals(lines);
  EXPECT_EQ(back.rooms, r.rooms);
  EXPECT_EQ(back.appliances, r.appliances);
}
