#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ambiact/ambient.hpp"
#include "ambiact/error.hpp"

using namespace ambiact;

TEST(EventLine, Examples) {
  const auto e = parse_event_line(R"({"ts":1000,"topic":"home/pir/bedroom","payload":"1"})");
  EXPECT_EQ(e.ts, 1000);
  EXPECT_EQ(e.source.kind, SensorKind::pir);
  EXPECT_EQ(e.source.room(), RoomId::Bedroom);
  EXPECT_EQ(e.state, 1);
  const auto tv = parse_event_line(R"({"ts":2000,"topic":"home/relay/tv","payload":"0"})");
  EXPECT_EQ(tv.source.kind, SensorKind::relay);
  EXPECT_EQ(tv.source.location, "tv");
  EXPECT_EQ(tv.state, 0);
}

TEST(EventLine, Errors) {
  auto message = [](std::string_view line) {
    try {
      parse_event_line(line, 7, "log.jsonl");
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 7u);
      EXPECT_EQ(e.source(), "log.jsonl");
      return e.detail().substr(0, e.detail().find(" '"));
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(R"({"ts":1,"topic":"home/pir/bedroom","payload":"2"})"), "invalid payload");
  EXPECT_EQ(message(R"({"ts":1,"topic":"home/pir/garage","payload":"1"})"), "unknown location");
  EXPECT_EQ(message(R"({"ts":1,"topic":"house/pir/bedroom","payload":"1"})"), "malformed topic");
  EXPECT_EQ(message(R"({"ts":1,"topic":"home/pir","payload":"1"})"), "malformed topic");
  EXPECT_EQ(message(R"({"ts":1,"topic":"home/relay/kettle","payload":"1"})"), "unknown location");
  EXPECT_NE(message(R"({"ts":1,"topic":"home/pir/outside","payload":"1"})"), "no error");
  EXPECT_NE(message("not json"), "no error");
}

TEST(EventLine, RoundTripBitExact) {
  std::mt19937_64 rng(6);
  const std::vector<std::string> topics = {"home/pir/kitchen", "home/pir/stairs", "home/relay/mirror_bulb",
                                           "home/force/water_bottle", "home/relay/bathroom_switch"};
  for (int i = 0; i < 500; ++i) {
    const std::string line = R"({"ts":)" + std::to_string(static_cast<std::int64_t>(rng() % 2000000000000)) +
                             R"(,"topic":")" + topics[rng() % topics.size()] + R"(","payload":")" +
                             std::to_string(rng() % 2) + "\"}";
    const auto e = parse_event_line(line);
    const auto text = format_event(e);
    EXPECT_EQ(parse_event_line(text), e);
    EXPECT_EQ(format_event(parse_event_line(text)), text);
  }
}

TEST(MergeStreams, MatchesSortOracle) {
  std::mt19937_64 rng(7);
  const std::vector<SensorAddress> sources = {
      make_address(SensorKind::pir, "bedroom"), make_address(SensorKind::pir, "kitchen"),
      make_address(SensorKind::relay, "tv"), make_address(SensorKind::force, "water_bottle")};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<AmbientEvent>> streams(sources.size());
    std::vector<AmbientEvent> all;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      TimestampMs ts = 0;
      const auto n = rng() % 20;
      for (std::size_t i = 0; i < n; ++i) {
        ts += static_cast<TimestampMs>(rng() % 3);  // frequent cross-stream ties
        streams[s].push_back({ts, sources[s], static_cast<int>(rng() % 2)});
        all.push_back(streams[s].back());
      }
    }
    auto oracle = all;
    std::stable_sort(oracle.begin(), oracle.end(), [](const AmbientEvent& a, const AmbientEvent& b) {
      return std::make_tuple(a.ts, std::string(to_string(a.source.kind)), a.source.location) <
             std::make_tuple(b.ts, std::string(to_string(b.source.kind)), b.source.location);
    });
    EXPECT_EQ(merge_streams(streams), oracle);
  }
}

TEST(MergeStreams, IdentityAndUnorderedError) {
  const auto a = make_address(SensorKind::pir, "hall");
  std::vector<std::vector<AmbientEvent>> one = {{{1, a, 1}, {5, a, 0}}};
  EXPECT_EQ(merge_streams(one), one[0]);
  std::vector<std::vector<AmbientEvent>> bad = {{{1, a, 1}}, {{5, a, 1}, {3, a, 0}}};
  try {
    merge_streams(bad);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("stream 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("index 1"), std::string::npos) << msg;
  }
}

TEST(MergeStreams, SameTimestampAcrossRoomsIsLexicographic) {
  const auto k = make_address(SensorKind::pir, "kitchen");
  const auto b = make_address(SensorKind::pir, "bedroom");
  const auto t = make_address(SensorKind::relay, "tv");
  std::vector<std::vector<AmbientEvent>> s = {{{10, t, 1}}, {{10, k, 1}}, {{10, b, 0}}};
  const auto m = merge_streams(s);
  EXPECT_EQ(m[0].source, b);
  EXPECT_EQ(m[1].source, k);
  EXPECT_EQ(m[2].source, t);
}

TEST(ClockOffsets, ShiftOnlyNamedSources) {
  const auto a = make_address(SensorKind::pir, "hall");
  const auto tv = make_address(SensorKind::relay, "tv");
  const std::vector<AmbientEvent> ev = {{100, a, 1}, {200, tv, 1}};
  const auto out = apply_clock_offsets(ev, {{tv, -150}});
  EXPECT_EQ(out[0].ts, 100);
  EXPECT_EQ(out[1].ts, 50);
}
