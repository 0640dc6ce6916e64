#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambiact/fusion.hpp"

namespace ambiact {

/// Activity ranks, 1 = highest priority. Names match case-insensitively with
/// whitespace collapsed; the table's own spelling is kept for output.
class PriorityTable {
 public:
  PriorityTable() = default;

  /// Throws Error for a rank < 1 or a duplicate activity.
  void set(std::string_view activity, int rank);
  std::optional<int> rank(std::string_view activity) const;
  /// Table spelling of a ranked activity.
  std::optional<std::string> spelling(std::string_view activity) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Entries in file order.
  const std::vector<std::pair<std::string, int>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, int>> entries_;
  std::map<std::string, std::size_t> index_;  // normalized key -> entry
};

// CSV: activity,priority
PriorityTable parse_priorities(const std::vector<std::string>& lines, std::string_view source_name = "<priorities>");
PriorityTable read_priorities(const std::filesystem::path& path);
std::string format_priorities(const PriorityTable& table);

/// Rarer activities get higher priority: distinct counts sorted ascending
/// map to ranks 1, 2, ...; equal counts share a rank.
PriorityTable priorities_from_frequencies(const std::map<std::string, std::size_t>& counts);

enum class LabelMethod { priority, frequency, tie, none };
std::string_view to_string(LabelMethod m);
std::optional<LabelMethod> parse_method(std::string_view text);

struct WindowDecision {
  std::string label;
  LabelMethod method = LabelMethod::none;

  friend bool operator==(const WindowDecision&, const WindowDecision&) = default;
};

/// One label for a window of tick labels.
///
/// Ranked labels are considered first: if exactly one observed label holds
/// the best observed rank it wins (method priority). When several share the
/// best rank, or nothing observed is ranked, the most frequent candidate
/// wins (method frequency); a frequency tie goes to the tied label whose
/// first occurrence is latest (method tie). A window holding a single
/// distinct label reports method frequency.
///
/// Throws Error("no labels") on an empty window.
WindowDecision label_window(std::span<const std::string> labels, const PriorityTable& priorities);

inline constexpr std::string_view kNoDataLabel = "NoData";

struct WindowLabel {
  TimestampMs start_ts = 0;
  TimestampMs end_ts = 0;
  std::string label;
  LabelMethod method = LabelMethod::none;

  friend bool operator==(const WindowLabel&, const WindowLabel&) = default;
};

/// Tumbling windows of `span_minutes` starting at `origin_ts` (default: the
/// first tick) and covering every tick. Windows without ticks are labelled
/// NoData with method none.
std::vector<WindowLabel> windowize(std::span<const DerivedTick> timeline, int span_minutes,
                                   const PriorityTable& priorities,
                                   std::optional<TimestampMs> origin_ts = std::nullopt);

// CSV: window_start,window_end,label,method
std::string format_window_labels(std::span<const WindowLabel> windows);
std::vector<WindowLabel> parse_window_labels(const std::vector<std::string>& lines,
                                             std::string_view source_name = "<labels>");
std::vector<WindowLabel> read_window_labels(const std::filesystem::path& path);

}  // namespace ambiact
