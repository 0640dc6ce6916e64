// ambiact: command-line front end. Every subcommand reads and writes the
// library's text formats; `pipeline` chains them in memory.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ambiact/ambient.hpp"
#include "ambiact/butterworth.hpp"
#include "ambiact/centroid.hpp"
#include "ambiact/error.hpp"
#include "ambiact/features.hpp"
#include "ambiact/fusion.hpp"
#include "ambiact/io.hpp"
#include "ambiact/labelling.hpp"
#include "ambiact/nn.hpp"
#include "ambiact/occupancy.hpp"
#include "ambiact/pipeline.hpp"
#include "ambiact/profile.hpp"
#include "ambiact/simulator.hpp"

#ifndef AMBIACT_DATA_DIR
#define AMBIACT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace ambiact;

namespace {

struct Options {
  // shared run configuration
  std::uint64_t seed = 1;
  int tz_offset_minutes = 0;
  int span_minutes = 2;
  std::string rules_path = std::string(AMBIACT_DATA_DIR) + "/rules/household.csv";
  std::string priorities_path = std::string(AMBIACT_DATA_DIR) + "/priority/household.csv";
  std::string centroids_path;
  std::string bundle_path;
  int filter_order = 3;
  double cutoff_hz = 3.0;
  double sample_rate_hz = 20.0;
  std::int64_t max_gap_ms = kDefaultMaxGapMs;
  std::size_t window_len = kDefaultWindowLen;
  double overlap = kDefaultOverlap;
  double sigma = 0.0;
  double dropout = 0.0;
  std::string start_date = "2024-01-01";
  std::int64_t inactivity_timeout_ms = 0;

  // per-subcommand paths
  std::string in;
  std::string out;
  std::string out_dir;
  std::string script;
  std::string inertial;
  std::vector<std::string> events;
  std::string features;
  std::string predictions;
  std::string intervals;
  std::string timeline;
  std::string labels;
  std::string format = "json";
  bool keep_intermediate = false;
  bool human = false;
  std::vector<std::string> classes;
  std::optional<std::uint64_t> init_seed;
};

void write_output(const std::string& path, std::string_view text) {
  if (path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

FilterSpec filter_spec(const Options& o) {
  FilterSpec f{o.filter_order, o.cutoff_hz, o.sample_rate_hz};
  f.validate();
  return f;
}

TimestampMs origin_for(const Options& o) {
  const auto parts = io::split(o.start_date, '-');
  if (parts.size() != 3) throw Error("start date must be YYYY-MM-DD");
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(io::parse_int(parts[0]))},
                                        std::chrono::month{static_cast<unsigned>(io::parse_int(parts[1]))},
                                        std::chrono::day{static_cast<unsigned>(io::parse_int(parts[2]))}};
  if (!ymd.ok()) throw Error("invalid start date '" + o.start_date + "'");
  const auto day = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return TimeZone{o.tz_offset_minutes}.midnight(day);
}

sim::SimConfig sim_config(const Options& o, std::uint64_t seed) {
  sim::SimConfig c;
  c.origin_ts = origin_for(o);
  c.noise = {o.sigma, o.dropout, seed};
  c.noise.validate();
  return c;
}

PipelineConfig pipeline_config(const Options& o, bool load_tables) {
  PipelineConfig c;
  c.max_gap_ms = o.max_gap_ms;
  c.filter = filter_spec(o);
  c.window_len = o.window_len;
  c.overlap = o.overlap;
  c.span_minutes = o.span_minutes;
  c.tz = {o.tz_offset_minutes};
  if (o.inactivity_timeout_ms > 0) c.detector.inactivity_timeout_ms = o.inactivity_timeout_ms;
  if (load_tables) {
    c.rules = read_rules(o.rules_path);
    c.priorities = read_priorities(o.priorities_path);
  }
  return c;
}

CentroidModel load_or_calibrate(const Options& o, const PipelineConfig& cfg) {
  if (!o.centroids_path.empty()) return read_centroids(o.centroids_path);
  return calibrate(sim_config(o, o.seed + 1), cfg);
}

std::vector<AmbientEvent> load_events(const std::vector<std::string>& paths) {
  std::vector<std::vector<AmbientEvent>> streams;
  for (const auto& p : paths) streams.push_back(read_events(p));
  return merge_streams(streams);
}

std::vector<SampleSeries> load_segments(const std::string& path, const PipelineConfig& cfg) {
  std::vector<SampleSeries> segments;
  for (const auto& series : read_inertial(path)) {
    for (auto& s : prepare_segments(series, cfg.max_gap_ms, cfg.tz)) segments.push_back(std::move(s));
  }
  return segments;
}

// --- subcommands ------------------------------------------------------------

void cmd_simulate(const Options& o) {
  const auto script = sim::read_script(o.script);
  const auto sc = sim_config(o, o.seed);
  const auto rules = read_rules(o.rules_path);
  const auto pri = read_priorities(o.priorities_path);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  {
    std::ofstream f(dir / "inertial.txt", std::ios::binary);
    if (!f) throw Error((dir / "inertial.txt").string() + ": cannot open for writing");
    for (std::int64_t d = 0; d < script.day_count(); ++d) {
      std::string text;
      append_inertial(text, sim::simulate_day_inertial(script, d, sc));
      f << text;
    }
    if (!f) throw Error((dir / "inertial.txt").string() + ": write failed");
  }
  io::write_file(dir / "events.jsonl", format_events(sim::simulate_events(script, sc)));
  const auto truth = sim::truth_timeline(script, sc, rules);
  io::write_file(dir / "truth_timeline.csv", format_timeline(truth));
  io::write_file(dir / "truth_labels.csv",
                 format_window_labels(label_days(truth, o.span_minutes, pri, TimeZone{o.tz_offset_minutes})));
}

void cmd_filter(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  write_output(o.out, format_inertial(filter_segments(load_segments(o.in, cfg), cfg.filter)));
}

void cmd_segment(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  std::string out = "subject_id,start_ts,end_ts\n";
  for (const auto& s : load_segments(o.in, cfg)) {
    for (const auto& w : segment(s, cfg.window_len, cfg.overlap)) {
      out += s.subject_id + "," + std::to_string(w.start_ts) + "," + std::to_string(w.end_ts) + "\n";
    }
  }
  write_output(o.out, out);
}

void cmd_features(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  write_output(o.out, format_features(segment_features(load_segments(o.in, cfg), cfg.window_len, cfg.overlap)));
}

void cmd_classify(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  if (!o.bundle_path.empty()) {
    if (o.in.empty()) throw Error("classify with --bundle needs --in <inertial>");
    const auto bundle = nn::read_bundle(o.bundle_path);
    const auto segments = load_segments(o.in, cfg);
    std::vector<SampleWindow> windows;
    for (const auto& s : segments) {
      auto w = segment(s, bundle.input_len, cfg.overlap);
      windows.insert(windows.end(), w.begin(), w.end());
    }
    const auto probs = nn::classify_windows_parallel(windows, bundle);
    std::string out = "start_ts,end_ts,label";
    for (const auto& c : bundle.class_names) out += ",p_" + c;
    out += '\n';
    for (std::size_t i = 0; i < windows.size(); ++i) {
      out += std::to_string(windows[i].start_ts) + "," + std::to_string(windows[i].end_ts) + "," +
             bundle.class_names[probs[i].argmax()];
      for (double p : probs[i].probs) out += "," + io::format_double(p);
      out += '\n';
    }
    write_output(o.out, out);
    return;
  }
  if (o.features.empty()) throw Error("classify needs --features (centroid model) or --bundle with --in");
  const auto model = load_or_calibrate(o, cfg);
  write_output(o.out, format_predictions(predict_windows(read_features(o.features), model)));
}

void cmd_calibrate(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  write_output(o.out, format_centroids(calibrate(sim_config(o, o.seed + 1), cfg)));
}

void cmd_init_bundle(const Options& o) {
  auto classes = o.classes;
  if (classes.empty()) {
    for (auto a : kAllBasicActivities) {
      if (a != BasicActivity::Sleep) classes.emplace_back(to_string(a));
    }
  }
  write_output(o.out, nn::format_bundle(nn::default_architecture(classes, 3, o.window_len, o.init_seed)));
}

void cmd_occupancy(const Options& o) {
  const auto cfg = pipeline_config(o, false);
  write_output(o.out, format_intervals(reconstruct_occupancy(load_events(o.events), cfg.detector)));
}

void cmd_fuse(const Options& o) {
  const auto rules = read_rules(o.rules_path);
  write_output(o.out, format_timeline(derive_timeline(read_predictions(o.predictions), read_intervals(o.intervals), rules)));
}

void cmd_label(const Options& o) {
  const auto pri = read_priorities(o.priorities_path);
  write_output(o.out, format_window_labels(label_days(read_timeline(o.timeline), o.span_minutes, pri,
                                                      TimeZone{o.tz_offset_minutes})));
}

void cmd_profile(const Options& o) {
  const auto days = profile_days(read_window_labels(o.labels), TimeZone{o.tz_offset_minutes});
  write_output(o.out, profile_json(days, false));
}

void cmd_report(const Options& o) {
  const auto days = profile_days(read_window_labels(o.labels), TimeZone{o.tz_offset_minutes});
  write_output(o.out, o.format == "csv" ? profile_csv(days) : profile_json(days, true));
}

void cmd_pipeline(const Options& o) {
  const auto cfg = pipeline_config(o, true);
  const auto model = load_or_calibrate(o, cfg);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);

  std::vector<WindowPrediction> predictions;
  std::vector<AmbientEvent> events;
  std::vector<SampleSeries> filtered;
  std::vector<FeatureVector> features;
  std::string raw;
  auto absorb = [&](InertialStages st) {
    predictions.insert(predictions.end(), st.predictions.begin(), st.predictions.end());
    if (o.keep_intermediate) {
      std::move(st.filtered.begin(), st.filtered.end(), std::back_inserter(filtered));
      std::move(st.features.begin(), st.features.end(), std::back_inserter(features));
    }
  };
  if (!o.script.empty()) {
    const auto script = sim::read_script(o.script);
    const auto sc = sim_config(o, o.seed);
    for (std::int64_t d = 0; d < script.day_count(); ++d) {
      const auto series = sim::simulate_day_inertial(script, d, sc);
      if (o.keep_intermediate) append_inertial(raw, series);
      absorb(run_inertial(series, model, cfg));
    }
    events = sim::simulate_events(script, sc);
    io::write_file(dir / "events.jsonl", format_events(events));
  } else {
    if (o.inertial.empty() || o.events.empty()) throw Error("pipeline needs --script, or --inertial and --events");
    for (const auto& series : read_inertial(o.inertial)) absorb(run_inertial(series, model, cfg));
    std::stable_sort(predictions.begin(), predictions.end(),
                     [](const WindowPrediction& a, const WindowPrediction& b) { return a.start_ts < b.start_ts; });
    events = load_events(o.events);
  }
  if (o.keep_intermediate) {
    if (!o.script.empty()) io::write_file(dir / "inertial.txt", raw);
    io::write_file(dir / "filtered.txt", format_inertial(filtered));
    io::write_file(dir / "features.csv", format_features(features));
  }
  const auto result = finish_pipeline(std::move(predictions), events, cfg);
  io::write_file(dir / "predictions.csv", format_predictions(result.predictions));
  io::write_file(dir / "intervals.csv", format_intervals(result.occupancy));
  io::write_file(dir / "timeline.csv", format_timeline(result.timeline));
  io::write_file(dir / "labels.csv", format_window_labels(result.labels));
  io::write_file(dir / "profile.json", profile_json(result.days, false));
  io::write_file(dir / "report.csv", profile_csv(result.days));
}

void print_error(const std::string& message, const std::string& file = "", std::size_t line = 0) {
  nlohmann::ordered_json j;
  j["error"] = message;
  if (!file.empty()) j["file"] = file;
  if (line > 0) j["line"] = line;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Activity recognition and behaviour profiling over inertial and ambient sensor data", "ambiact"};
  app.set_config("--config", "", "TOML/INI run configuration; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--seed", o.seed, "Random seed for simulation; calibration uses seed + 1");
  app.add_option("--tz-offset", o.tz_offset_minutes, "Local time offset from UTC in minutes");
  app.add_option("--span", o.span_minutes, "Profiling window span in minutes")->check(CLI::IsMember({2, 5, 10}));
  app.add_option("--rules", o.rules_path, "Fusion rule table (CSV)")->check(CLI::ExistingFile);
  app.add_option("--priorities", o.priorities_path, "Priority table (CSV)")->check(CLI::ExistingFile);
  app.add_option("--centroids", o.centroids_path, "Centroid model (JSON); calibrated from simulation if absent")
      ->check(CLI::ExistingFile);
  app.add_option("--bundle", o.bundle_path, "Neural network weights bundle (JSON)")->check(CLI::ExistingFile);
  app.add_option("--filter-order", o.filter_order, "Butterworth order");
  app.add_option("--cutoff", o.cutoff_hz, "Butterworth cutoff in Hz");
  app.add_option("--sample-rate", o.sample_rate_hz, "Sampling rate in Hz");
  app.add_option("--max-gap", o.max_gap_ms, "Largest gap (ms) filled by interpolation");
  app.add_option("--window", o.window_len, "Samples per classifier window");
  app.add_option("--overlap", o.overlap, "Classifier window overlap fraction")->check(CLI::Range(0.0, 0.999));
  app.add_option("--sigma", o.sigma, "Simulated gaussian noise (m/s^2)");
  app.add_option("--dropout", o.dropout, "Simulated per-sample dropout probability");
  app.add_option("--start-date", o.start_date, "Calendar date of simulated day 0 (YYYY-MM-DD)");
  app.add_option("--inactivity-timeout", o.inactivity_timeout_ms, "Close PIR intervals after this many ms of silence");

  auto* simulate = app.add_subcommand("simulate", "Simulate a scripted household");
  simulate->add_option("--script", o.script, "Schedule script (CSV)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out-dir", o.out_dir, "Output directory")->required();

  auto* filter = app.add_subcommand("filter", "Interpolate gaps and low-pass filter an inertial file");
  auto* seg = app.add_subcommand("segment", "List classifier windows of an inertial file");
  auto* feat = app.add_subcommand("features", "Extract window features from an inertial file");
  for (auto* sub : {filter, seg, feat}) {
    sub->add_option("--in", o.in, "Inertial input")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output file, - for stdout")->required();
  }

  auto* classify = app.add_subcommand("classify", "Classify windows with a centroid model or a weights bundle");
  classify->add_option("--features", o.features, "Feature file (centroid model)")->check(CLI::ExistingFile);
  classify->add_option("--in", o.in, "Filtered inertial file (weights bundle)")->check(CLI::ExistingFile);
  classify->add_option("--out", o.out, "Output file, - for stdout")->required();

  auto* calib = app.add_subcommand("calibrate", "Fit a centroid model on a simulated calibration session");
  calib->add_option("--out", o.out, "Output file, - for stdout")->required();

  auto* init = app.add_subcommand("init-bundle", "Write the default network architecture as a weights bundle");
  init->add_option("--out", o.out, "Output file, - for stdout")->required();
  init->add_option("--classes", o.classes, "Class names (default: the basic activities)");
  init->add_option("--random-seed", o.init_seed, "Draw small random weights instead of zeros");

  auto* occ = app.add_subcommand("occupancy", "Reconstruct room and appliance intervals from event logs");
  occ->add_option("--events", o.events, "Event logs (JSON lines)")->required()->check(CLI::ExistingFile);
  occ->add_option("--out", o.out, "Output file, - for stdout")->required();

  auto* fuse = app.add_subcommand("fuse", "Fuse window predictions with occupancy into a derived timeline");
  fuse->add_option("--predictions", o.predictions, "Window predictions")->required()->check(CLI::ExistingFile);
  fuse->add_option("--intervals", o.intervals, "Occupancy intervals")->required()->check(CLI::ExistingFile);
  fuse->add_option("--out", o.out, "Output file, - for stdout")->required();

  auto* label = app.add_subcommand("label", "Collapse a derived timeline into profiling windows");
  label->add_option("--timeline", o.timeline, "Derived timeline")->required()->check(CLI::ExistingFile);
  label->add_option("--out", o.out, "Output file, - for stdout")->required();

  auto* profile = app.add_subcommand("profile", "Day and week profiles of window labels (JSON)");
  auto* report = app.add_subcommand("report", "Human-readable (JSON) or plot-ready (CSV) profile report");
  for (auto* sub : {profile, report}) {
    sub->add_option("--labels", o.labels, "Window labels")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output file, - for stdout")->required();
  }
  report->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  pipeline->add_option("--script", o.script, "Simulate this schedule script")->check(CLI::ExistingFile);
  pipeline->add_option("--inertial", o.inertial, "Inertial input file")->check(CLI::ExistingFile);
  pipeline->add_option("--events", o.events, "Event logs")->check(CLI::ExistingFile);
  pipeline->add_option("--out-dir", o.out_dir, "Output directory")->required();
  pipeline->add_flag("--keep-intermediate", o.keep_intermediate, "Also write inertial, filtered and feature files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error(e.what());
    return 2;
  }

  std::cerr << "# effective configuration\n" << app.config_to_str(true, false);

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") cmd_simulate(o);
    else if (name == "filter") cmd_filter(o);
    else if (name == "segment") cmd_segment(o);
    else if (name == "features") cmd_features(o);
    else if (name == "classify") cmd_classify(o);
    else if (name == "calibrate") cmd_calibrate(o);
    else if (name == "init-bundle") cmd_init_bundle(o);
    else if (name == "occupancy") cmd_occupancy(o);
    else if (name == "fuse") cmd_fuse(o);
    else if (name == "label") cmd_label(o);
    else if (name == "profile") cmd_profile(o);
    else if (name == "report") cmd_report(o);
    else if (name == "pipeline") cmd_pipeline(o);
  } catch (const ParseError& e) {
    print_error(e.detail(), e.source(), e.line());
    return 1;
  } catch (const std::exception& e) {
    print_error(e.what());
    return 1;
  }
  return 0;
}
