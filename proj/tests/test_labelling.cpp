#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ambiact/error.hpp"
#include "ambiact/labelling.hpp"
#include "support.hpp"

using namespace ambiact;

namespace {

PriorityTable example_priorities() { return read_priorities(support::data_dir() / "fixtures" / "labelling_example_priority.csv"); }

std::vector<std::string> v(std::initializer_list<const char*> l) { return {l.begin(), l.end()}; }

std::vector<DerivedTick> ticks_every(TimestampMs start, std::int64_t step, const std::vector<std::string>& labels) {
  std::vector<DerivedTick> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.push_back({start + static_cast<TimestampMs>(i) * step, {labels[i], ActivityFlag::Normal}});
  }
  return out;
}

}  // namespace

TEST(Priorities, TableAndErrors) {
  const auto t = example_priorities();
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.rank("drinking   WATER"), 1);
  EXPECT_EQ(t.spelling("kitchen activity"), "Kitchen Activity");
  EXPECT_FALSE(t.rank("Sleeping").has_value());
  PriorityTable p;
  EXPECT_THROW(p.set("a", 0), Error);
  p.set("a", 1);
  EXPECT_THROW(p.set("A", 2), Error);
  EXPECT_THROW(parse_priorities(v({"activity,priority", "x,first"})), ParseError);
}

TEST(Priorities, FromFrequencies) {
  const auto p = priorities_from_frequencies({{"common", 90}, {"rare", 2}, {"mid", 10}, {"mid2", 10}});
  EXPECT_EQ(p.rank("rare"), 1);
  EXPECT_EQ(p.rank("mid"), 2);
  EXPECT_EQ(p.rank("mid2"), 2);
  EXPECT_EQ(p.rank("common"), 3);
}

TEST(LabelWindow, ReferenceWindows) {
  const auto t = example_priorities();
  EXPECT_EQ(label_window(v({"Walking outside", "Walking outside", "Walking outside", "Walking outside",
                            "Walking outside"}), t),
            (WindowDecision{"Walking Outside", LabelMethod::frequency}));
  EXPECT_EQ(label_window(v({"Sitting in Hall", "Sitting in Hall", "Sitting in Hall", "Kitchen Activity",
                            "Drinking water"}), t),
            (WindowDecision{"Drinking Water", LabelMethod::priority}));
  EXPECT_EQ(label_window(v({"Sitting in Hall", "Sitting in Hall", "Kitchen Activity", "Kitchen Activity",
                            "walking outside"}), t),
            (WindowDecision{"Kitchen Activity", LabelMethod::tie}));
}

TEST(LabelWindow, UnanimousFullWindow) {
  std::vector<std::string> w(24, "Sitting in Hall");
  EXPECT_EQ(label_window(w, example_priorities()), (WindowDecision{"Sitting in Hall", LabelMethod::frequency}));
}

TEST(LabelWindow, EmptyThrows) {
  EXPECT_THROW(label_window(std::vector<std::string>{}, example_priorities()), Error);
}

TEST(LabelWindow, UnrankedFallsBackToFrequency) {
  EXPECT_EQ(label_window(v({"a", "b", "b"}), PriorityTable{}), (WindowDecision{"b", LabelMethod::frequency}));
  EXPECT_EQ(label_window(v({"a", "b", "b", "a"}), PriorityTable{}), (WindowDecision{"b", LabelMethod::tie}));
}

TEST(LabelWindow, SingleTopRankedLabelAlwaysWins) {
  std::mt19937_64 rng(11);
  const auto t = example_priorities();
  const std::vector<std::string> others = {"Sitting in Hall", "Walking Outside", "Idle", "Kitchen Activity"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> w(1 + rng() % 30);
    for (auto& s : w) s = others[rng() % others.size()];
    w[rng() % w.size()] = "Drinking Water";
    const bool unanimous = std::all_of(w.begin(), w.end(), [](const std::string& x) { return x == "Drinking Water"; });
    EXPECT_EQ(label_window(w, t),
              (WindowDecision{"Drinking Water", unanimous ? LabelMethod::frequency : LabelMethod::priority}));
  }
}

// Reordering a window may change its label only when the decision was a tie.
TEST(LabelWindow, OrderMattersOnlyOnTies) {
  std::mt19937_64 rng(12);
  const auto t = example_priorities();
  const std::vector<std::string> pool = {"Sitting in Hall", "Kitchen Activity", "Walking Outside", "x", "y"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> w(1 + rng() % 12);
    for (auto& s : w) s = pool[rng() % pool.size()];
    const auto a = label_window(w, t);
    auto shuffled = w;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto b = label_window(shuffled, t);
    EXPECT_EQ(a.method == LabelMethod::tie, b.method == LabelMethod::tie);
    if (a.method != LabelMethod::tie) EXPECT_EQ(a, b);
    EXPECT_EQ(label_window(w, t), a);
  }
}

TEST(Windowize, ReferenceFixture) {
  const auto timeline = read_timeline(support::data_dir() / "fixtures" / "labelling_example_timeline.csv");
  const auto prio = read_priorities(support::data_dir() / "fixtures" / "labelling_example_priority.csv");
  const auto w = windowize(timeline, 10, prio);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].label, "Walking Outside");
  EXPECT_EQ(w[1].label, "Drinking Water");
  EXPECT_EQ(w[2].label, "Kitchen Activity");
  EXPECT_EQ(w[2].method, LabelMethod::tie);
  EXPECT_EQ(w[0].end_ts - w[0].start_ts, 600000);
}

TEST(Windowize, ShortTimelineIsOneWindow) {
  const auto t = ticks_every(0, kTickMs, std::vector<std::string>(24, "Sitting in Hall"));
  const auto w = windowize(t, 2, example_priorities());
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].start_ts, 0);
  EXPECT_EQ(w[0].end_ts, 120000);
}

TEST(Windowize, EmptyWindowIsNoData) {
  auto t = ticks_every(0, kTickMs, {"a", "a"});
  t.push_back({300000, {"b", ActivityFlag::Normal}});
  const auto w = windowize(t, 2, PriorityTable{});
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[1].label, kNoDataLabel);
  EXPECT_EQ(w[1].method, LabelMethod::none);
  EXPECT_EQ(w[2].label, "b");
  EXPECT_THROW(windowize(t, 2, PriorityTable{}, 1000), Error);
  std::vector<DerivedTick> unordered = {t[1], t[0]};
  EXPECT_THROW(windowize(unordered, 2, PriorityTable{}), Error);
}

TEST(Windowize, WindowsTileTheTimeline) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DerivedTick> t;
    TimestampMs ts = static_cast<TimestampMs>(rng() % 100000);
    const auto origin = ts - static_cast<TimestampMs>(rng() % 50000);
    for (int i = 0; i < 200; ++i) {
      ts += kTickMs * (1 + static_cast<TimestampMs>(rng() % 4));
      t.push_back({ts, {rng() % 2 ? "p" : "q", ActivityFlag::Normal}});
    }
    const int span = std::array{2, 5, 10}[rng() % 3];
    const auto w = windowize(t, span, PriorityTable{}, origin);
    ASSERT_FALSE(w.empty());
    EXPECT_EQ(w.front().start_ts, origin);
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_EQ(w[i].end_ts - w[i].start_ts, span * 60000LL);
      if (i > 0) EXPECT_EQ(w[i].start_ts, w[i - 1].end_ts);
    }
    EXPECT_GT(w.back().end_ts, t.back().ts);
    EXPECT_EQ(windowize(t, span, PriorityTable{}, origin), w);
  }
}

TEST(WindowLabels, CsvRoundTrip) {
  const std::vector<WindowLabel> w = {{0, 120000, "Sitting in Hall", LabelMethod::frequency},
                                      {120000, 240000, "NoData", LabelMethod::none},
                                      {240000, 360000, "Drinking Activity", LabelMethod::priority}};
  const auto text = format_window_labels(w);
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  EXPECT_EQ(parse_window_labels(lines), w);
}
