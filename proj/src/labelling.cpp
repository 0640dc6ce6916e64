#include "ambiact/labelling.hpp"

#include <algorithm>
#include <set>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

void PriorityTable::set(std::string_view activity, int rank) {
  if (rank < 1) throw Error("priority must be >= 1 for '" + std::string(activity) + "'");
  const std::string key = io::normalize_key(activity);
  if (key.empty()) throw Error("empty activity name in priority table");
  if (index_.contains(key)) throw Error("duplicate activity '" + std::string(activity) + "' in priority table");
  index_[key] = entries_.size();
  entries_.emplace_back(std::string(io::trim(activity)), rank);
}

std::optional<int> PriorityTable::rank(std::string_view activity) const {
  const auto it = index_.find(io::normalize_key(activity));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

std::optional<std::string> PriorityTable::spelling(std::string_view activity) const {
  const auto it = index_.find(io::normalize_key(activity));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].first;
}

PriorityTable parse_priorities(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  PriorityTable t;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "activity,priority") throw ParseError(src, ln + 1, "missing priority header");
      header = true;
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 2) throw ParseError(src, ln + 1, "expected 2 fields");
    try {
      t.set(f[0], static_cast<int>(io::parse_int(f[1])));
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
  }
  if (!header) throw ParseError(src, 0, "missing priority header");
  return t;
}

PriorityTable read_priorities(const std::filesystem::path& path) {
  return parse_priorities(io::read_lines(path), path.string());
}

std::string format_priorities(const PriorityTable& table) {
  std::string out = "activity,priority\n";
  for (const auto& [name, rank] : table.entries()) out += name + "," + std::to_string(rank) + "\n";
  return out;
}

PriorityTable priorities_from_frequencies(const std::map<std::string, std::size_t>& counts) {
  std::set<std::size_t> distinct;
  for (const auto& [name, c] : counts) distinct.insert(c);
  PriorityTable t;
  for (const auto& [name, c] : counts) {
    t.set(name, static_cast<int>(std::distance(distinct.begin(), distinct.find(c))) + 1);
  }
  return t;
}

std::string_view to_string(LabelMethod m) {
  switch (m) {
    case LabelMethod::priority: return "priority";
    case LabelMethod::frequency: return "frequency";
    case LabelMethod::tie: return "tie";
    case LabelMethod::none: return "none";
  }
  return "none";
}

std::optional<LabelMethod> parse_method(std::string_view text) {
  for (auto m : {LabelMethod::priority, LabelMethod::frequency, LabelMethod::tie, LabelMethod::none}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

WindowDecision label_window(std::span<const std::string> labels, const PriorityTable& priorities) {
  if (labels.empty()) throw Error("no labels");
  struct Seen {
    std::string spelling;  // first observed
    std::size_t count = 0;
    std::size_t first = 0;
    std::optional<int> rank;
  };
  std::vector<Seen> seen;  // in order of first occurrence
  std::map<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string key = io::normalize_key(labels[i]);
    auto [it, inserted] = by_key.try_emplace(key, seen.size());
    if (inserted) seen.push_back({labels[i], 0, i, priorities.rank(labels[i])});
    ++seen[it->second].count;
  }
  auto output_name = [&](const Seen& s) { return priorities.spelling(s.spelling).value_or(s.spelling); };
  if (seen.size() == 1) return {output_name(seen.front()), LabelMethod::frequency};

  std::vector<const Seen*> candidates;
  std::optional<int> best_rank;
  for (const auto& s : seen) {
    if (s.rank && (!best_rank || *s.rank < *best_rank)) best_rank = s.rank;
  }
  for (const auto& s : seen) {
    if (!best_rank || s.rank == best_rank) candidates.push_back(&s);
  }
  if (best_rank && candidates.size() == 1) return {output_name(*candidates.front()), LabelMethod::priority};

  std::size_t max_count = 0;
  for (const auto* s : candidates) max_count = std::max(max_count, s->count);
  const Seen* winner = nullptr;
  std::size_t tied = 0;
  for (const auto* s : candidates) {
    if (s->count != max_count) continue;
    ++tied;
    if (!winner || s->first > winner->first) winner = s;
  }
  return {output_name(*winner), tied > 1 ? LabelMethod::tie : LabelMethod::frequency};
}

std::vector<WindowLabel> windowize(std::span<const DerivedTick> timeline, int span_minutes,
                                   const PriorityTable& priorities, std::optional<TimestampMs> origin_ts) {
  if (span_minutes <= 0) throw Error("window span must be positive");
  std::vector<WindowLabel> out;
  if (timeline.empty()) return out;
  const std::int64_t span = static_cast<std::int64_t>(span_minutes) * 60 * 1000;
  const TimestampMs origin = origin_ts.value_or(timeline.front().ts);
  if (timeline.front().ts < origin) throw Error("timeline starts before the window origin");
  std::size_t i = 0;
  std::vector<std::string> labels;
  for (TimestampMs start = origin; i < timeline.size(); start += span) {
    const TimestampMs end = start + span;
    labels.clear();
    for (; i < timeline.size() && timeline[i].ts < end; ++i) {
      if (i > 0 && timeline[i].ts <= timeline[i - 1].ts) throw Error("timeline not strictly ordered by ts");
      labels.push_back(timeline[i].activity.name);
    }
    if (labels.empty()) {
      out.push_back({start, end, std::string(kNoDataLabel), LabelMethod::none});
    } else {
      auto d = label_window(labels, priorities);
      out.push_back({start, end, std::move(d.label), d.method});
    }
  }
  return out;
}

std::string format_window_labels(std::span<const WindowLabel> windows) {
  std::string out = "window_start,window_end,label,method\n";
  for (const auto& w : windows) {
    out += std::to_string(w.start_ts) + "," + std::to_string(w.end_ts) + "," + w.label + "," +
           std::string(to_string(w.method)) + "\n";
  }
  return out;
}

std::vector<WindowLabel> parse_window_labels(const std::vector<std::string>& lines, std::string_view source_name) {
  const std::string src(source_name);
  std::vector<WindowLabel> out;
  bool header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty()) continue;
    if (!header) {
      if (line != "window_start,window_end,label,method") throw ParseError(src, ln + 1, "missing label header");
      header = true;
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 4) throw ParseError(src, ln + 1, "expected 4 fields");
    WindowLabel w;
    try {
      w.start_ts = io::parse_int(f[0]);
      w.end_ts = io::parse_int(f[1]);
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
    if (w.end_ts <= w.start_ts) throw ParseError(src, ln + 1, "window end must be after start");
    const auto m = parse_method(f[3]);
    if (!m) throw ParseError(src, ln + 1, "unknown method '" + f[3] + "'");
    w.label = f[2];
    w.method = *m;
    if (!out.empty() && w.start_ts < out.back().end_ts) throw ParseError(src, ln + 1, "windows overlap or are unordered");
    out.push_back(std::move(w));
  }
  if (!header) throw ParseError(src, 0, "missing label header");
  return out;
}

std::vector<WindowLabel> read_window_labels(const std::filesystem::path& path) {
  return parse_window_labels(io::read_lines(path), path.string());
}

}  // namespace ambiact
