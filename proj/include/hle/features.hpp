#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/framing.hpp"

namespace hle {

// What a feature measures. String names: exec, do, todo, wl, enter, exit,
// progr, delay.
enum class View : std::uint8_t { execute, perform, todo, workload, enter, exit, progress, delay };

inline constexpr std::array<View, 8> kAllViews = {View::execute, View::perform, View::todo,  View::workload,
                                                  View::enter,   View::exit,    View::progress, View::delay};

std::string_view view_name(View v);
std::optional<View> parse_view(std::string_view name);
// Comma-separated list of view names; throws ConfigError on unknown names.
std::vector<View> parse_views(std::string_view list);

// exec -> activity; do, todo, wl -> resource; the rest -> segment.
ComponentKind view_kind(View v);

struct FeatureId {
  View view;
  Component component;

  friend auto operator<=>(const FeatureId&, const FeatureId&) = default;
};

// "exec-follow", "wl-Jane", "delay-(report,answer)".
std::string feature_name(const EventLog& log, const FeatureId& f);

struct FeatureSelection {
  std::vector<View> views{kAllViews.begin(), kAllViews.end()};
  // Component names to keep (as printed by component_name). Empty keeps all.
  std::vector<std::string> components;
};

// Values of every selected feature over a contiguous window range. Count
// views are defined everywhere; delay only where progr > 0.
class EvaluationMatrix {
 public:
  struct Row {
    FeatureId feature;
    std::vector<std::optional<double>> values;  // indexed by window - windows.first
  };

  EvaluationMatrix() = default;
  EvaluationMatrix(WindowSet windows, std::vector<Row> rows);

  const WindowSet& windows() const noexcept { return windows_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  // nullopt when the feature is not in the matrix, the window is out of
  // range or the value is undefined.
  std::optional<double> at(const FeatureId& f, WindowIndex w) const;

 private:
  WindowSet windows_;
  std::vector<Row> rows_;  // sorted by feature
};

// Per-component time columns (milliseconds) feeding the window kernels.
// Built once per log; evaluation of any cell is a single kernel call.
class FeatureEvaluator {
 public:
  FeatureEvaluator(const LogIndex& index, const Framing& framing);

  const LogIndex& index() const noexcept { return *index_; }
  const Framing& framing() const noexcept { return framing_; }

  std::int64_t exec(Code activity, WindowIndex w) const;
  std::int64_t done(Code resource, WindowIndex w) const;
  std::int64_t todo(Code resource, WindowIndex w) const;
  std::int64_t workload(Code resource, WindowIndex w) const;
  std::int64_t enter(Segment s, WindowIndex w) const;
  std::int64_t exit(Segment s, WindowIndex w) const;
  std::int64_t progress(Segment s, WindowIndex w) const;
  // Average accumulated waiting time in seconds; nullopt when nothing is in
  // progress on s during w.
  std::optional<double> delay(Segment s, WindowIndex w) const;

  std::optional<double> evaluate(const FeatureId& f, WindowIndex w) const;

  // Every selected (view, component) over `windows`. `threads` = 0 uses the
  // hardware concurrency; results do not depend on it.
  EvaluationMatrix matrix(const WindowSet& windows, const FeatureSelection& selection = {},
                          unsigned threads = 0) const;

  std::vector<FeatureId> features(const FeatureSelection& selection) const;

 private:
  struct ResourceColumns {
    std::vector<std::int64_t> occurred;
    std::vector<std::int64_t> triggered;  // kernels::kNoTrigger for case starts
  };
  struct SegmentColumns {
    std::vector<std::int64_t> triggered;
    std::vector<std::int64_t> completed;
  };

  std::pair<std::int64_t, std::int64_t> range(WindowIndex w) const;
  const SegmentColumns& segment(Segment s) const;

  const LogIndex* index_;
  Framing framing_;
  std::vector<std::vector<std::int64_t>> activity_cols_;
  std::vector<ResourceColumns> resource_cols_;
  std::vector<SegmentColumns> segment_cols_;
};

// Nearest-rank percentile: the value at rank ceil(p*n) of the ascending
// sort, clamped to [1, n]. `sorted` must be non-empty.
double nearest_rank(std::span<const double> sorted, double p);

struct ThresholdTable {
  double percentile = 0.0;
  bool exclude_zeros = false;
  std::map<View, double> by_view;
  // One message per view that had no values to pool.
  std::vector<std::string> warnings;

  std::optional<double> threshold(View v) const;
};

// Pools every defined value of the same view across components and windows.
// Throws ConfigError when p is outside [0,1].
ThresholdTable compute_thresholds(const EvaluationMatrix& matrix, double p, bool exclude_zeros = false);

struct HighLevelEvent {
  FeatureId feature;
  WindowIndex window;
  double value;

  friend bool operator==(const HighLevelEvent&, const HighLevelEvent&) = default;
};

// Every defined cell whose value reaches its view's threshold, ordered by
// (window, feature).
std::vector<HighLevelEvent> generate_hles(const EvaluationMatrix& matrix, const ThresholdTable& thresholds);

}  // namespace hle
