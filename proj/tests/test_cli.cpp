#include <gtest/gtest.h>

#include <json.hpp>

#include "support.hpp"

using namespace ambiact::support;
namespace fs = std::filesystem;

namespace {

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

void cli_ok(const std::string& args, const fs::path& dir) {
  const auto err = dir / "stderr.txt";
  ASSERT_EQ(run_cli(args, err), 0) << args << "\n" << slurp(err);
}

}  // namespace

// Every stage run on its own must reproduce the single-shot pipeline exactly.
TEST(Cli, ChainedStagesMatchPipeline) {
  const auto dir = scratch_dir("chain");
  const auto script = q(data_dir() / "scripts" / "morning.csv");
  const std::string common = "--seed 3 --sigma 0.3 --dropout 0.01 ";
  const auto p = dir / "pipe";
  const auto c = dir / "chain";
  fs::create_directories(c);
  cli_ok(common + "pipeline --script " + script + " --out-dir " + q(p) + " --keep-intermediate", dir);
  cli_ok(common + "simulate --script " + script + " --out-dir " + q(c), dir);
  cli_ok(common + "filter --in " + q(c / "inertial.txt") + " --out " + q(c / "filtered.txt"), dir);
  cli_ok(common + "features --in " + q(c / "filtered.txt") + " --out " + q(c / "features.csv"), dir);
  cli_ok(common + "calibrate --out " + q(c / "centroids.json"), dir);
  cli_ok(common + "--centroids " + q(c / "centroids.json") + " classify --features " + q(c / "features.csv") +
             " --out " + q(c / "predictions.csv"),
         dir);
  cli_ok(common + "occupancy --events " + q(c / "events.jsonl") + " --out " + q(c / "intervals.csv"), dir);
  cli_ok(common + "fuse --predictions " + q(c / "predictions.csv") + " --intervals " + q(c / "intervals.csv") +
             " --out " + q(c / "timeline.csv"),
         dir);
  cli_ok(common + "label --timeline " + q(c / "timeline.csv") + " --out " + q(c / "labels.csv"), dir);
  cli_ok(common + "profile --labels " + q(c / "labels.csv") + " --out " + q(c / "profile.json"), dir);
  cli_ok(common + "report --format csv --labels " + q(c / "labels.csv") + " --out " + q(c / "report.csv"), dir);
  for (const char* f : {"inertial.txt", "events.jsonl", "filtered.txt", "features.csv", "predictions.csv",
                        "intervals.csv", "timeline.csv", "labels.csv", "profile.json", "report.csv"}) {
    const auto a = slurp(p / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_TRUE(a == slurp(c / f)) << f << " differs";
  }
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const auto dir = scratch_dir("repeat");
  const auto script = q(data_dir() / "scripts" / "morning.csv");
  cli_ok("--sigma 0.5 --dropout 0.05 pipeline --script " + script + " --out-dir " + q(dir / "a"), dir);
  cli_ok("--sigma 0.5 --dropout 0.05 pipeline --script " + script + " --out-dir " + q(dir / "b"), dir);
  for (const char* f : {"predictions.csv", "timeline.csv", "labels.csv", "profile.json"}) {
    EXPECT_TRUE(slurp(dir / "a" / f) == slurp(dir / "b" / f)) << f;
  }
}

TEST(Cli, ZeroBundleGivesUniformProbabilities) {
  const auto dir = scratch_dir("bundle");
  cli_ok("--seed 2 simulate --script " + q(data_dir() / "scripts" / "morning.csv") + " --out-dir " + q(dir), dir);
  cli_ok("init-bundle --out " + q(dir / "bundle.json"), dir);
  cli_ok("--bundle " + q(dir / "bundle.json") + " classify --in " + q(dir / "inertial.txt") + " --out " +
             q(dir / "probs.csv"),
         dir);
  const auto lines = lines_of(slurp(dir / "probs.csv"));
  ASSERT_GT(lines.size(), 10u);
  EXPECT_EQ(lines[0], "start_ts,end_ts,label,p_walk,p_jog,p_sit,p_stand,p_lie,p_stairUp,p_stairDown");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = ambiact::io::split(lines[i], ',');
    ASSERT_EQ(cells.size(), 10u);
    EXPECT_EQ(cells[2], "walk");
    for (std::size_t k = 3; k < cells.size(); ++k) EXPECT_NEAR(std::stod(cells[k]), 1.0 / 7.0, 1e-12);
  }
}

TEST(Cli, ParseErrorReportsFileAndLine) {
  const auto dir = scratch_dir("error");
  const auto bad = dir / "bad.jsonl";
  std::ofstream(bad) << R"({"ts":1,"topic":"home/pir/hall","payload":"1"})" << "\n"
                     << R"({"ts":2,"topic":"home/pir/garage","payload":"1"})" << "\n";
  const auto err = dir / "stderr.txt";
  EXPECT_EQ(run_cli("occupancy --events " + q(bad) + " --out -", err), 1);
  const auto lines = lines_of(slurp(err));
  ASSERT_FALSE(lines.empty());
  const auto j = nlohmann::json::parse(lines.back());
  EXPECT_EQ(j["line"], 2);
  EXPECT_NE(j["file"].get<std::string>().find("bad.jsonl"), std::string::npos);
  EXPECT_EQ(j["error"].get<std::string>().rfind("unknown location", 0), 0u);
  EXPECT_EQ(run_cli("label --timeline " + q(dir / "missing.csv") + " --out -", err), 2);
}

TEST(Cli, ReferenceLabellingExample) {
  const auto dir = scratch_dir("labelling_example");
  cli_ok("--span 10 --priorities " + q(data_dir() / "fixtures" / "labelling_example_priority.csv") + " label --timeline " +
             q(data_dir() / "fixtures" / "labelling_example_timeline.csv") + " --out " + q(dir / "labels.csv"),
         dir);
  const auto lines = lines_of(slurp(dir / "labels.csv"));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[1], "1704067200000,1704067800000,Walking Outside,frequency");
  EXPECT_EQ(lines[2], "1704067800000,1704068400000,Drinking Water,priority");
  EXPECT_EQ(lines[3], "1704068400000,1704069000000,Kitchen Activity,tie");
}
