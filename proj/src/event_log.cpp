#include "hle/event_log.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "hle/csv.hpp"
#include "hle/errors.hpp"

namespace hle {

namespace {

std::vector<std::string> distinct_sorted(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

Code code_in(const std::vector<std::string>& sorted, const std::string& name) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), name);
  return static_cast<Code>(it - sorted.begin());
}

std::optional<Code> find_code(const std::vector<std::string>& sorted, std::string_view name) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), name);
  if (it == sorted.end() || *it != name) return std::nullopt;
  return static_cast<Code>(it - sorted.begin());
}

}  // namespace

EventLog EventLog::from_records(std::vector<EventRecord> records, Provenance provenance) {
  EventLog log;
  log.provenance_ = std::move(provenance);

  std::vector<std::string> cases, acts, ress;
  cases.reserve(records.size());
  acts.reserve(records.size());
  ress.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.case_id.empty() || r.activity.empty() || r.resource.empty()) {
      throw ConfigError("event " + std::to_string(i + 1) + " has an empty attribute");
    }
    cases.push_back(r.case_id);
    acts.push_back(r.activity);
    ress.push_back(r.resource);
  }
  log.cases_ = distinct_sorted(std::move(cases));
  log.activities_ = distinct_sorted(std::move(acts));
  log.resources_ = distinct_sorted(std::move(ress));

  log.events_.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    log.events_.push_back(Event{static_cast<EventId>(i + 1), code_in(log.cases_, r.case_id),
                                code_in(log.activities_, r.activity),
                                code_in(log.resources_, r.resource), r.time});
  }
  std::sort(log.events_.begin(), log.events_.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.case_code != b.case_code) return a.case_code < b.case_code;
    return a.id < b.id;
  });
  return log;
}

std::optional<Code> EventLog::activity_code(std::string_view name) const {
  return find_code(activities_, name);
}

std::optional<Code> EventLog::resource_code(std::string_view name) const {
  return find_code(resources_, name);
}

TimePoint EventLog::min_time() const {
  if (events_.empty()) throw Error("no events");
  return events_.front().time;
}

TimePoint EventLog::max_time() const {
  if (events_.empty()) throw Error("no events");
  return events_.back().time;
}

EventLog ingest_csv(const std::filesystem::path& path, const ColumnMapping& mapping,
                    std::string_view timestamp_format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + path.string() + "'");

  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw ConfigError("input file '" + path.string() + "' has no header row");

  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header->begin(), header->end(), name);
    if (it == header->end()) throw ConfigError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header->begin());
  };
  const std::size_t case_col = column(mapping.case_column);
  const std::size_t act_col = column(mapping.activity_column);
  const std::size_t time_col = column(mapping.timestamp_column);
  const std::size_t res_col = column(mapping.resource_column);
  const std::size_t needed = std::max({case_col, act_col, time_col, res_col}) + 1;

  std::vector<EventRecord> records;
  while (auto row = reader.next()) {
    const std::size_t line = reader.line();
    if (row->size() < needed) throw RowError(line, "expected at least " + std::to_string(needed) + " fields");
    EventRecord rec;
    rec.case_id = std::move((*row)[case_col]);
    rec.activity = std::move((*row)[act_col]);
    rec.resource = std::move((*row)[res_col]);
    const std::string& ts = (*row)[time_col];
    if (rec.case_id.empty()) throw RowError(line, "empty value in column '" + mapping.case_column + "'");
    if (rec.activity.empty()) throw RowError(line, "empty value in column '" + mapping.activity_column + "'");
    if (rec.resource.empty()) throw RowError(line, "empty value in column '" + mapping.resource_column + "'");
    if (ts.empty()) throw RowError(line, "empty value in column '" + mapping.timestamp_column + "'");
    try {
      rec.time = parse_timestamp(ts, timestamp_format);
    } catch (const ConfigError& e) {
      throw RowError(line, e.what());
    }
    records.push_back(std::move(rec));
  }

  return EventLog::from_records(std::move(records),
                                Provenance{path.string(), mapping, std::string(timestamp_format)});
}

std::vector<Step> compute_steps(const EventLog& log) {
  const auto& events = log.events();
  std::vector<EventIndex> last(log.cases().size(), kNoEvent);
  std::vector<Step> steps;
  steps.reserve(events.size());
  for (EventIndex i = 0; i < events.size(); ++i) {
    EventIndex& prev = last[events[i].case_code];
    if (prev != kNoEvent) steps.push_back({prev, i});
    prev = i;
  }
  std::sort(steps.begin(), steps.end());
  return steps;
}

std::string_view kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::activity: return "activity";
    case ComponentKind::resource: return "resource";
    case ComponentKind::segment: return "segment";
  }
  return "?";
}

std::optional<ComponentKind> parse_kind(std::string_view name) {
  if (name == "activity") return ComponentKind::activity;
  if (name == "resource") return ComponentKind::resource;
  if (name == "segment") return ComponentKind::segment;
  return std::nullopt;
}

std::string component_name(const EventLog& log, Component c) {
  switch (c.kind) {
    case ComponentKind::activity: return log.activity_name(c.first);
    case ComponentKind::resource: return log.resource_name(c.first);
    case ComponentKind::segment:
      return "(" + log.activity_name(c.first) + "," + log.activity_name(c.second) + ")";
  }
  return {};
}

ComponentSets component_sets(const EventLog& log, std::span<const Step> steps) {
  ComponentSets sets;
  sets.activities.resize(log.activities().size());
  std::iota(sets.activities.begin(), sets.activities.end(), Code{0});
  sets.resources.resize(log.resources().size());
  std::iota(sets.resources.begin(), sets.resources.end(), Code{0});
  for (const Step& s : steps) {
    sets.segments.push_back({log[s.first].activity, log[s.second].activity});
  }
  std::sort(sets.segments.begin(), sets.segments.end());
  sets.segments.erase(std::unique(sets.segments.begin(), sets.segments.end()), sets.segments.end());
  return sets;
}

LogIndex::LogIndex(const EventLog& log)
    : log_(&log), steps_(compute_steps(log)), trigger_(log.size(), kNoEvent),
      successor_(log.size(), kNoEvent) {
  sets_ = component_sets(log, steps_);
  for (const Step& s : steps_) {
    trigger_[s.second] = s.first;
    successor_[s.first] = s.second;
  }

  by_activity_.resize(log.activities().size());
  by_resource_.resize(log.resources().size());
  for (EventIndex i = 0; i < log.size(); ++i) {
    by_activity_[log[i].activity].push_back(i);
    by_resource_[log[i].resource].push_back(i);
  }
  by_segment_.resize(sets_.segments.size());
  for (const Step& s : steps_) {
    const Segment seg{log[s.first].activity, log[s.second].activity};
    by_segment_[*segment_position(seg)].push_back(s);
  }
}

std::optional<std::size_t> LogIndex::segment_position(Segment s) const {
  const auto& segs = sets_.segments;
  const auto it = std::lower_bound(segs.begin(), segs.end(), s);
  if (it == segs.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - segs.begin());
}

std::span<const Step> LogIndex::segment_steps(Segment s) const {
  const auto pos = segment_position(s);
  if (!pos) return {};
  return by_segment_[*pos];
}

std::span<const EventIndex> LogIndex::restrict_activity(std::string_view name) const {
  const auto code = log_->activity_code(name);
  if (!code) throw LookupError("unknown activity '" + std::string(name) + "'");
  return by_activity_[*code];
}

std::span<const EventIndex> LogIndex::restrict_resource(std::string_view name) const {
  const auto code = log_->resource_code(name);
  if (!code) throw LookupError("unknown resource '" + std::string(name) + "'");
  return by_resource_[*code];
}

std::span<const Step> LogIndex::restrict_segment(std::string_view from, std::string_view to) const {
  const auto a = log_->activity_code(from);
  const auto b = log_->activity_code(to);
  const auto pos = (a && b) ? segment_position({*a, *b}) : std::nullopt;
  if (!pos) {
    throw LookupError("unknown segment (" + std::string(from) + "," + std::string(to) + ")");
  }
  return by_segment_[*pos];
}

std::vector<Component> LogIndex::all_components() const {
  std::vector<Component> out;
  out.reserve(sets_.activities.size() + sets_.resources.size() + sets_.segments.size());
  for (Code a : sets_.activities) out.push_back(Component::activity(a));
  for (Code r : sets_.resources) out.push_back(Component::resource(r));
  for (const Segment& s : sets_.segments) out.push_back(Component::segment(s));
  return out;
}

}  // namespace hle
