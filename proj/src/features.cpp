#include "hle/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "hle/errors.hpp"
#include "hle/kernels.hpp"

namespace hle {

std::string_view view_name(View v) {
  switch (v) {
    case View::execute: return "exec";
    case View::perform: return "do";
    case View::todo: return "todo";
    case View::workload: return "wl";
    case View::enter: return "enter";
    case View::exit: return "exit";
    case View::progress: return "progr";
    case View::delay: return "delay";
  }
  return "?";
}

std::optional<View> parse_view(std::string_view name) {
  for (View v : kAllViews) {
    if (view_name(v) == name) return v;
  }
  return std::nullopt;
}

std::vector<View> parse_views(std::string_view list) {
  std::vector<View> views;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string_view token = list.substr(pos, comma - pos);
    if (!token.empty()) {
      const auto v = parse_view(token);
      if (!v) throw ConfigError("unknown view '" + std::string(token) + "'");
      if (std::find(views.begin(), views.end(), *v) == views.end()) views.push_back(*v);
    }
    pos = comma + 1;
  }
  if (views.empty()) throw ConfigError("no views selected");
  std::sort(views.begin(), views.end());
  return views;
}

ComponentKind view_kind(View v) {
  switch (v) {
    case View::execute: return ComponentKind::activity;
    case View::perform:
    case View::todo:
    case View::workload: return ComponentKind::resource;
    default: return ComponentKind::segment;
  }
}

std::string feature_name(const EventLog& log, const FeatureId& f) {
  return std::string(view_name(f.view)) + "-" + component_name(log, f.component);
}

EvaluationMatrix::EvaluationMatrix(WindowSet windows, std::vector<Row> rows)
    : windows_(windows), rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.feature < b.feature; });
}

std::optional<double> EvaluationMatrix::at(const FeatureId& f, WindowIndex w) const {
  if (!windows_.contains(w)) return std::nullopt;
  const auto it = std::lower_bound(rows_.begin(), rows_.end(), f,
                                   [](const Row& r, const FeatureId& key) { return r.feature < key; });
  if (it == rows_.end() || it->feature != f) return std::nullopt;
  return it->values[static_cast<std::size_t>(w - windows_.first)];
}

FeatureEvaluator::FeatureEvaluator(const LogIndex& index, const Framing& framing)
    : index_(&index), framing_(framing) {
  const EventLog& log = index.log();
  auto ms = [&](EventIndex i) { return to_millis(log[i].time); };

  activity_cols_.resize(log.activities().size());
  for (Code a = 0; a < activity_cols_.size(); ++a) {
    for (EventIndex i : index.activity_events(a)) activity_cols_[a].push_back(ms(i));
  }
  resource_cols_.resize(log.resources().size());
  for (Code r = 0; r < resource_cols_.size(); ++r) {
    auto& cols = resource_cols_[r];
    for (EventIndex i : index.resource_events(r)) {
      cols.occurred.push_back(ms(i));
      const EventIndex t = index.trigger_of(i);
      cols.triggered.push_back(t == kNoEvent ? kernels::kNoTrigger : ms(t));
    }
  }
  const auto& segs = index.components().segments;
  segment_cols_.resize(segs.size());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    for (const Step& s : index.segment_steps(segs[k])) {
      segment_cols_[k].triggered.push_back(ms(s.first));
      segment_cols_[k].completed.push_back(ms(s.second));
    }
  }
}

std::pair<std::int64_t, std::int64_t> FeatureEvaluator::range(WindowIndex w) const {
  const auto b = framing_.bounds(w);
  return {to_millis(b.start), to_millis(b.end)};
}

const FeatureEvaluator::SegmentColumns& FeatureEvaluator::segment(Segment s) const {
  static const SegmentColumns empty;
  const auto pos = index_->segment_position(s);
  return pos ? segment_cols_[*pos] : empty;
}

std::int64_t FeatureEvaluator::exec(Code activity, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  return kernels::count_in_range(activity_cols_.at(activity), lo, hi);
}

std::int64_t FeatureEvaluator::done(Code resource, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  return kernels::count_in_range(resource_cols_.at(resource).occurred, lo, hi);
}

std::int64_t FeatureEvaluator::todo(Code resource, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  return kernels::count_in_range(resource_cols_.at(resource).triggered, lo, hi);
}

std::int64_t FeatureEvaluator::workload(Code resource, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  const auto& cols = resource_cols_.at(resource);
  return kernels::count_workload(cols.occurred, cols.triggered, lo, hi);
}

std::int64_t FeatureEvaluator::enter(Segment s, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  return kernels::count_in_range(segment(s).triggered, lo, hi);
}

std::int64_t FeatureEvaluator::exit(Segment s, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  return kernels::count_in_range(segment(s).completed, lo, hi);
}

std::int64_t FeatureEvaluator::progress(Segment s, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  const auto& cols = segment(s);
  return kernels::crossing(cols.triggered, cols.completed, lo, hi).count;
}

std::optional<double> FeatureEvaluator::delay(Segment s, WindowIndex w) const {
  const auto [lo, hi] = range(w);
  const auto& cols = segment(s);
  const auto stats = kernels::crossing(cols.triggered, cols.completed, lo, hi);
  if (stats.count == 0) return std::nullopt;
  return static_cast<double>(stats.wait) / 1000.0 / static_cast<double>(stats.count);
}

std::optional<double> FeatureEvaluator::evaluate(const FeatureId& f, WindowIndex w) const {
  const Component& c = f.component;
  if (c.kind != view_kind(f.view)) {
    throw ConfigError("view '" + std::string(view_name(f.view)) + "' does not apply to a " +
                      std::string(kind_name(c.kind)));
  }
  auto count = [](std::int64_t n) { return std::optional<double>(static_cast<double>(n)); };
  switch (f.view) {
    case View::execute: return count(exec(c.first, w));
    case View::perform: return count(done(c.first, w));
    case View::todo: return count(todo(c.first, w));
    case View::workload: return count(workload(c.first, w));
    case View::enter: return count(enter(c.as_segment(), w));
    case View::exit: return count(exit(c.as_segment(), w));
    case View::progress: return count(progress(c.as_segment(), w));
    case View::delay: return delay(c.as_segment(), w);
  }
  return std::nullopt;
}

std::vector<FeatureId> FeatureEvaluator::features(const FeatureSelection& selection) const {
  const EventLog& log = index_->log();
  const std::set<std::string> keep(selection.components.begin(), selection.components.end());
  std::vector<FeatureId> out;
  for (const Component& c : index_->all_components()) {
    if (!keep.empty() && !keep.contains(component_name(log, c))) continue;
    for (View v : selection.views) {
      if (view_kind(v) == c.kind) out.push_back({v, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EvaluationMatrix FeatureEvaluator::matrix(const WindowSet& windows, const FeatureSelection& selection,
                                          unsigned threads) const {
  const std::vector<FeatureId> feats = features(selection);
  std::vector<EvaluationMatrix::Row> rows(feats.size());

  auto fill = [&](std::size_t k) {
    rows[k].feature = feats[k];
    rows[k].values.resize(windows.size());
    for (WindowIndex w = windows.first; w <= windows.last; ++w) {
      rows[k].values[static_cast<std::size_t>(w - windows.first)] = evaluate(feats[k], w);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, feats.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < feats.size(); ++k) fill(k);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t k = t; k < feats.size(); k += threads) fill(k);
      });
    }
  }
  return EvaluationMatrix(windows, std::move(rows));
}

double nearest_rank(std::span<const double> sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  // Guard against p*n landing a hair above an integer (0.7*10 etc.).
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::optional<double> ThresholdTable::threshold(View v) const {
  const auto it = by_view.find(v);
  if (it == by_view.end()) return std::nullopt;
  return it->second;
}

ThresholdTable compute_thresholds(const EvaluationMatrix& matrix, double p, bool exclude_zeros) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("percentile must lie in [0,1]");
  ThresholdTable table;
  table.percentile = p;
  table.exclude_zeros = exclude_zeros;

  std::map<View, std::vector<double>> pooled;
  std::set<View> present;
  for (const auto& row : matrix.rows()) {
    present.insert(row.feature.view);
    auto& pool = pooled[row.feature.view];
    for (const auto& v : row.values) {
      if (v && !(exclude_zeros && *v == 0.0)) pool.push_back(*v);
    }
  }
  for (View v : present) {
    auto& pool = pooled[v];
    if (pool.empty()) {
      table.warnings.push_back("view '" + std::string(view_name(v)) + "' has no values; no threshold derived");
      continue;
    }
    std::sort(pool.begin(), pool.end());
    table.by_view[v] = nearest_rank(pool, p);
  }
  return table;
}

std::vector<HighLevelEvent> generate_hles(const EvaluationMatrix& matrix, const ThresholdTable& thresholds) {
  std::vector<HighLevelEvent> out;
  const WindowSet& ws = matrix.windows();
  for (const auto& row : matrix.rows()) {
    const auto thr = thresholds.threshold(row.feature.view);
    if (!thr) continue;
    for (std::size_t k = 0; k < row.values.size(); ++k) {
      const auto& v = row.values[k];
      if (v && *v >= *thr) out.push_back({row.feature, ws.first + static_cast<WindowIndex>(k), *v});
    }
  }
  std::sort(out.begin(), out.end(), [](const HighLevelEvent& a, const HighLevelEvent& b) {
    if (a.window != b.window) return a.window < b.window;
    return a.feature < b.feature;
  });
  return out;
}

}  // namespace hle
