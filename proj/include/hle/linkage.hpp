#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/features.hpp"

namespace hle {

// Closeness of two components in [0,1], computed straight from the
// restrictions of the log. Each function takes distinct components.
double link_activity_pair(const LogIndex& index, Code a1, Code a2);
double link_resource_pair(const LogIndex& index, Code r1, Code r2);
double link_activity_resource(const LogIndex& index, Code a, Code r);
// 0 unless a is one of the segment's activities.
double link_activity_segment(const LogIndex& index, Code a, Segment s);
double link_resource_segment(const LogIndex& index, Code r, Segment s);
// Non-zero only for chained segments (x,y),(y,z), in either orientation.
double link_segment_pair(const LogIndex& index, Segment s1, Segment s2);

// Dispatches on the component kinds.
double link(const LogIndex& index, Component x1, Component x2);

// Link values of every unordered pair of log components. Only non-zero
// values are stored; lookups of absent pairs return 0.
class LinkTable {
 public:
  LinkTable() = default;

  // Builds from aggregated directly-follows, handover, co-execution and
  // triple counts in one pass over the steps.
  static LinkTable build(const LogIndex& index);

  // Symmetric. Identical components yield 1.
  double operator()(Component x1, Component x2) const;

  const std::vector<Component>& components() const noexcept { return components_; }
  // Keyed by (smaller, larger) component.
  const std::map<std::pair<Component, Component>, double>& nonzero() const noexcept { return links_; }

  void set(Component x1, Component x2, double value);

 private:
  std::vector<Component> components_;
  std::map<std::pair<Component, Component>, double> links_;
};

// Adjacent-window closeness of two high-level events: 1 for the same
// component (any views), the link value otherwise, 0 unless hle2 sits in
// the window right after hle1.
double proximity(const HighLevelEvent& hle1, const HighLevelEvent& hle2, const LinkTable& links);

struct CascadeAssignment {
  // ids[i] is the cascade of the i-th input event; ids run 1..count.
  std::vector<std::uint32_t> ids;
  std::uint32_t count = 0;
};

// Weakly connected components of the propagation graph (proximity >= lambda
// between adjacent windows). Cascades are numbered by earliest window, then
// by the smallest feature name inside that window, so ids do not depend on
// the input order. `names` gives the feature name of each input event.
CascadeAssignment cascades(std::span<const HighLevelEvent> hles, std::span<const std::string> names,
                           const LinkTable& links, double lambda);

// Convenience overload naming features through the log.
CascadeAssignment cascades(std::span<const HighLevelEvent> hles, const EventLog& log, const LinkTable& links,
                           double lambda);

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace hle
