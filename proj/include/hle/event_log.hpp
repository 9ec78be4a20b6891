#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hle/time.hpp"

namespace hle {

using EventId = std::uint64_t;
// Position of an event inside EventLog::events().
using EventIndex = std::size_t;
using Code = std::uint32_t;

inline constexpr EventIndex kNoEvent = static_cast<EventIndex>(-1);

struct EventRecord {
  std::string case_id;
  std::string activity;
  TimePoint time;
  std::string resource;
};

struct Event {
  EventId id;
  Code case_code;
  Code activity;
  Code resource;
  TimePoint time;
};

struct ColumnMapping {
  std::string case_column = "case";
  std::string activity_column = "activity";
  std::string timestamp_column = "timestamp";
  std::string resource_column = "resource";
};

struct Provenance {
  std::string source;
  ColumnMapping mapping;
  std::string timestamp_format = std::string(kIsoFormat);
};

// Immutable event log. Events are ordered by (timestamp, case, id); string
// attributes are interned into codes assigned in lexicographic order, so
// code order equals name order.
class EventLog {
 public:
  EventLog() = default;

  // Ids are assigned 1..n following record order. Throws ConfigError on an
  // empty case, activity or resource label.
  static EventLog from_records(std::vector<EventRecord> records, Provenance provenance = {});

  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](EventIndex i) const { return events_[i]; }

  const std::vector<std::string>& cases() const noexcept { return cases_; }
  const std::vector<std::string>& activities() const noexcept { return activities_; }
  const std::vector<std::string>& resources() const noexcept { return resources_; }

  const std::string& case_name(Code c) const { return cases_.at(c); }
  const std::string& activity_name(Code a) const { return activities_.at(a); }
  const std::string& resource_name(Code r) const { return resources_.at(r); }

  std::optional<Code> activity_code(std::string_view name) const;
  std::optional<Code> resource_code(std::string_view name) const;

  TimePoint min_time() const;
  TimePoint max_time() const;

  const Provenance& provenance() const noexcept { return provenance_; }

 private:
  std::vector<Event> events_;
  std::vector<std::string> cases_;
  std::vector<std::string> activities_;
  std::vector<std::string> resources_;
  Provenance provenance_;
};

// Reads a headered CSV. Missing mapped columns raise ConfigError naming the
// column; bad timestamps and empty attributes raise RowError with the line.
EventLog ingest_csv(const std::filesystem::path& path, const ColumnMapping& mapping = {},
                    std::string_view timestamp_format = kIsoFormat);

// Directly-follows pair inside one case, as positions into the log.
struct Step {
  EventIndex first;
  EventIndex second;

  friend auto operator<=>(const Step&, const Step&) = default;
};

// Per case, consecutive events in log order. Equal timestamps inside a case
// are ordered by event id, so a case with k events yields k-1 steps.
std::vector<Step> compute_steps(const EventLog& log);

struct Segment {
  Code from;
  Code to;

  friend auto operator<=>(const Segment&, const Segment&) = default;
};

enum class ComponentKind : std::uint8_t { activity, resource, segment };

// An activity, a resource or a segment. For activities and resources only
// `first` is meaningful.
struct Component {
  ComponentKind kind;
  Code first;
  Code second = 0;

  static Component activity(Code a) { return {ComponentKind::activity, a, 0}; }
  static Component resource(Code r) { return {ComponentKind::resource, r, 0}; }
  static Component segment(Segment s) { return {ComponentKind::segment, s.from, s.to}; }

  Segment as_segment() const { return {first, second}; }

  friend auto operator<=>(const Component&, const Component&) = default;
};

std::string_view kind_name(ComponentKind kind);
std::optional<ComponentKind> parse_kind(std::string_view name);

// "a", "r1" or "(a,b)".
std::string component_name(const EventLog& log, Component c);

struct ComponentSets {
  std::vector<Code> activities;
  std::vector<Code> resources;
  std::vector<Segment> segments;
};

// Steps, segments and per-component restrictions of one log, computed once.
// Holds a reference to the log, which must outlive it.
class LogIndex {
 public:
  explicit LogIndex(const EventLog& log);

  const EventLog& log() const noexcept { return *log_; }
  const std::vector<Step>& steps() const noexcept { return steps_; }
  const ComponentSets& components() const noexcept { return sets_; }

  // Event that triggers event i, or kNoEvent for the first event of a case.
  EventIndex trigger_of(EventIndex i) const { return trigger_[i]; }
  // Event triggered by event i, or kNoEvent for the last event of a case.
  EventIndex successor_of(EventIndex i) const { return successor_[i]; }

  std::span<const EventIndex> activity_events(Code a) const { return by_activity_.at(a); }
  std::span<const EventIndex> resource_events(Code r) const { return by_resource_.at(r); }
  // Empty when s is not a segment of the log.
  std::span<const Step> segment_steps(Segment s) const;

  std::optional<std::size_t> segment_position(Segment s) const;

  // Name-based lookups; throw LookupError for unknown components.
  std::span<const EventIndex> restrict_activity(std::string_view name) const;
  std::span<const EventIndex> restrict_resource(std::string_view name) const;
  std::span<const Step> restrict_segment(std::string_view from, std::string_view to) const;

  // Every activity, resource and segment of the log in canonical order.
  std::vector<Component> all_components() const;

 private:
  const EventLog* log_;
  std::vector<Step> steps_;
  std::vector<EventIndex> trigger_;
  std::vector<EventIndex> successor_;
  ComponentSets sets_;
  std::vector<std::vector<EventIndex>> by_activity_;
  std::vector<std::vector<EventIndex>> by_resource_;
  std::vector<std::vector<Step>> by_segment_;
};

ComponentSets component_sets(const EventLog& log, std::span<const Step> steps);

}  // namespace hle
