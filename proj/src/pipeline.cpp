#include "ambiact/pipeline.hpp"

#include <algorithm>
#include <map>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

std::vector<SampleSeries> prepare_segments(const SampleSeries& series, std::int64_t max_gap_ms, const TimeZone& tz) {
  std::vector<SampleSeries> out;
  const auto& s = series.samples;
  std::size_t begin = 0;
  while (begin < s.size()) {
    const auto day = tz.day_index(s[begin].ts);
    std::size_t end = begin + 1;
    while (end < s.size() && tz.day_index(s[end].ts) == day) ++end;
    SampleSeries part;
    part.subject_id = series.subject_id;
    part.nominal_period_ms = series.nominal_period_ms;
    part.samples.assign(s.begin() + static_cast<std::ptrdiff_t>(begin), s.begin() + static_cast<std::ptrdiff_t>(end));
    for (auto& seg : interpolate_gaps(part, max_gap_ms)) out.push_back(std::move(seg));
    begin = end;
  }
  if (out.empty()) throw Error("empty input");
  return out;
}

std::vector<SampleSeries> filter_segments(std::span<const SampleSeries> segments, const FilterSpec& spec) {
  std::vector<SampleSeries> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(butterworth_lowpass(s, spec));
  return out;
}

std::vector<FeatureVector> segment_features(std::span<const SampleSeries> segments, std::size_t window_len,
                                            double overlap) {
  std::vector<SampleWindow> windows;
  std::int64_t period = 50;
  for (const auto& s : segments) {
    auto w = segment(s, window_len, overlap);
    windows.insert(windows.end(), w.begin(), w.end());
    period = s.nominal_period_ms;
  }
  FeatureOptions opts;
  opts.period_ms = period;
  return extract_features_parallel(windows, opts);
}

std::vector<WindowPrediction> predict_windows(std::span<const FeatureVector> rows, const CentroidModel& model) {
  const auto labels = centroid_classify_parallel(rows, model);
  std::vector<WindowPrediction> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({rows[i].start_ts, rows[i].end_ts, labels[i]});
  return out;
}

std::string format_predictions(std::span<const WindowPrediction> predictions) {
  std::string out = "start_ts,end_ts,label\n";
  for (const auto& p : predictions) {
    out += std::to_string(p.start_ts) + "," + std::to_string(p.end_ts) + "," + p.label + "\n";
  }
  return out;
}

std::vector<WindowPrediction> parse_predictions(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  std::vector<WindowPrediction> out;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty()) continue;
    const auto f = io::split(line, ',');
    if (!header) {
      if (f.size() < 3 || f[0] != "start_ts" || f[1] != "end_ts" || f[2] != "label") {
        throw ParseError(src, ln + 1, "missing prediction header");
      }
      header = true;
      continue;
    }
    if (f.size() < 3) throw ParseError(src, ln + 1, "expected at least 3 fields");
    WindowPrediction p;
    try {
      p.start_ts = io::parse_int(f[0]);
      p.end_ts = io::parse_int(f[1]);
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
    if (p.end_ts <= p.start_ts) throw ParseError(src, ln + 1, "window end must be after start");
    if (!out.empty() && p.start_ts < out.back().start_ts) throw ParseError(src, ln + 1, "windows not ordered");
    p.label = f[2];
    out.push_back(std::move(p));
  }
  if (!header) throw ParseError(src, 0, "missing prediction header");
  return out;
}

std::vector<WindowPrediction> read_predictions(const std::filesystem::path& path) {
  return parse_predictions(io::read_lines(path), path.string());
}

std::vector<BasicTick> assign_ticks(std::span<const WindowPrediction> predictions, std::int64_t tick_ms) {
  if (tick_ms <= 0 || tick_ms % 2 != 0) throw Error("tick length must be positive and even");
  const std::int64_t half = tick_ms / 2;
  struct Best {
    std::int64_t distance;
    std::size_t window;
  };
  std::map<TimestampMs, Best> best;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    // ticks whose midpoint t + half lies in [start, end)
    const auto first_mid = p.start_ts - half;
    TimestampMs t = first_mid - (((first_mid % tick_ms) + tick_ms) % tick_ms);
    if (t < first_mid) t += tick_ms;
    for (; t + half < p.end_ts; t += tick_ms) {
      const std::int64_t d = std::abs(p.centre_ts() - (t + half));
      auto [it, inserted] = best.try_emplace(t, Best{d, i});
      if (!inserted && d < it->second.distance) it->second = {d, i};
    }
  }
  std::vector<BasicTick> out;
  out.reserve(best.size());
  for (const auto& [t, b] : best) out.push_back({t, parse_basic(predictions[b.window].label)});
  return out;
}

std::vector<DerivedTick> derive_timeline(std::span<const WindowPrediction> predictions,
                                         const OccupancyResult& context, const FusionRuleTable& rules) {
  const auto ticks = derive_sleep(assign_ticks(predictions));
  return fuse_timeline(ticks, context, rules);
}

std::vector<WindowLabel> label_days(std::span<const DerivedTick> timeline, int span_minutes,
                                    const PriorityTable& priorities, const TimeZone& tz) {
  if (span_minutes != 2 && span_minutes != 5 && span_minutes != 10) {
    throw Error("window span must be 2, 5 or 10 minutes");
  }
  std::vector<WindowLabel> out;
  std::size_t begin = 0;
  while (begin < timeline.size()) {
    const auto day = tz.day_index(timeline[begin].ts);
    std::size_t end = begin + 1;
    while (end < timeline.size() && tz.day_index(timeline[end].ts) == day) ++end;
    const auto windows = windowize(timeline.subspan(begin, end - begin), span_minutes, priorities, tz.midnight(day));
    out.insert(out.end(), windows.begin(), windows.end());
    begin = end;
  }
  return out;
}

InertialStages run_inertial(const SampleSeries& series, const CentroidModel& model, const PipelineConfig& config) {
  InertialStages st;
  if (series.empty()) return st;
  st.filtered = filter_segments(prepare_segments(series, config.max_gap_ms, config.tz), config.filter);
  st.features = segment_features(st.filtered, config.window_len, config.overlap);
  st.predictions = predict_windows(st.features, model);
  return st;
}

CentroidModel calibrate(const sim::SimConfig& sim_config, const PipelineConfig& config) {
  const auto script = sim::calibration_script();
  const auto series = sim::simulate_inertial(script, sim_config);
  const auto filtered = filter_segments(prepare_segments(series, config.max_gap_ms, config.tz), config.filter);
  const auto rows = segment_features(filtered, config.window_len, config.overlap);
  std::vector<FeatureVector> pure;
  std::vector<std::string> labels;
  for (const auto& r : rows) {
    for (const auto& e : script.entries) {
      const auto from = sim_config.origin_ts + e.start_ms;
      if (r.start_ts >= from && r.end_ts <= from + e.duration_ms) {
        pure.push_back(r);
        labels.emplace_back(to_string(e.basic));
        break;
      }
    }
  }
  if (pure.empty()) throw Error("calibration produced no windows");
  return fit_centroids(pure, labels);
}

PipelineResult finish_pipeline(std::vector<WindowPrediction> predictions, std::span<const AmbientEvent> events,
                               const PipelineConfig& config) {
  PipelineResult r;
  r.predictions = std::move(predictions);
  r.occupancy = reconstruct_occupancy(events, config.detector);
  r.timeline = derive_timeline(r.predictions, r.occupancy, config.rules);
  r.labels = label_days(r.timeline, config.span_minutes, config.priorities, config.tz);
  r.days = profile_days(r.labels, config.tz);
  return r;
}

PipelineResult run_simulated(const sim::Script& script, const sim::SimConfig& sim_config, const CentroidModel& model,
                             const PipelineConfig& config) {
  std::vector<WindowPrediction> predictions;
  for (std::int64_t d = 0; d < script.day_count(); ++d) {
    const auto day = run_inertial(sim::simulate_day_inertial(script, d, sim_config), model, config);
    predictions.insert(predictions.end(), day.predictions.begin(), day.predictions.end());
  }
  const auto events = sim::simulate_events(script, sim_config);
  return finish_pipeline(std::move(predictions), events, config);
}

}  // namespace ambiact
