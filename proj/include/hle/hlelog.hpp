#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/features.hpp"
#include "hle/framing.hpp"
#include "hle/linkage.hpp"

namespace hle {

// One event of the high-level log. activity/case/timestamp carry the core
// mapping; the remaining fields are diagnostics.
struct HighLevelLogEntry {
  std::uint64_t hle_id = 0;
  std::uint32_t case_id = 0;
  std::string activity;
  TimePoint timestamp;  // start of the window
  WindowIndex window = 0;
  View view = View::execute;
  ComponentKind component_kind = ComponentKind::activity;
  std::string component;
  double value = 0.0;
  double threshold = 0.0;

  friend bool operator==(const HighLevelLogEntry&, const HighLevelLogEntry&) = default;
};

// One entry per high-level event, sorted by (case, window, activity) and
// numbered 1..n in that order. `assignment` must align with `hles`.
std::vector<HighLevelLogEntry> build_hlel(const EventLog& log, std::span<const HighLevelEvent> hles,
                                          const CascadeAssignment& assignment, const ThresholdTable& thresholds,
                                          const Framing& framing);

// Total order over high-level activity names: listed names first in list
// order, then everything else lexicographically. The empty order is plain
// lexicographic.
class FlattenOrder {
 public:
  FlattenOrder() = default;
  explicit FlattenOrder(std::vector<std::string> listed);

  // One activity name per line; blank lines and '#' comments are skipped.
  static FlattenOrder load(const std::filesystem::path& path);

  bool before(const std::string& a, const std::string& b) const;
  const std::vector<std::string>& listed() const noexcept { return listed_; }

 private:
  std::vector<std::string> listed_;
  std::map<std::string, std::size_t> rank_;
};

// Within each (case, window) group entries follow `order`; groups follow
// window index. Idempotent.
std::vector<HighLevelLogEntry> flatten(std::vector<HighLevelLogEntry> entries, const FlattenOrder& order = {});

inline constexpr const char* kHlelHeader =
    "hle_id,case,activity,timestamp,window,view,component_kind,component,value,threshold";

void write_hlel_csv(std::ostream& out, std::span<const HighLevelLogEntry> entries,
                    std::string_view timestamp_format = kIsoFormat);
// Inverse of write_hlel_csv. Throws RowError on malformed rows.
std::vector<HighLevelLogEntry> read_hlel_csv(std::istream& in, std::string_view timestamp_format = kIsoFormat);

struct DirectlyFollowsGraph {
  std::map<std::string, std::size_t> nodes;
  std::map<std::pair<std::string, std::string>, std::size_t> edges;
};

// Consecutive entries of the same case in the given (flattened) order.
DirectlyFollowsGraph discover_dfg(std::span<const HighLevelLogEntry> flattened);
std::string to_dot(const DirectlyFollowsGraph& dfg);
std::string export_dfg(std::span<const HighLevelLogEntry> flattened);

struct SummaryColumn {
  std::string activity;
  std::string unit;  // "hours" for delay, otherwise the native count unit
};

struct SummaryRow {
  std::int64_t period = 0;  // 1-based
  TimePoint start;
  std::size_t events = 0;
  std::size_t hles = 0;
  std::vector<std::size_t> counts;         // per column
  std::vector<std::optional<double>> avgs;  // per column; empty period -> nullopt
};

struct SummaryTable {
  std::vector<SummaryColumn> columns;
  std::vector<SummaryRow> rows;
};

// Per period starting at `origin`: original events, high-level events, and
// count/mean value of each selected high-level activity (delay in hours).
// An empty `activities` selects the four most frequent ones.
SummaryTable summarize(const EventLog& log, std::span<const HighLevelLogEntry> entries, TimePoint origin,
                       Duration period, std::vector<std::string> activities = {});

void write_summary_csv(std::ostream& out, const SummaryTable& table,
                       std::string_view timestamp_format = kIsoFormat);

// Shortest representation that parses back to the same double.
std::string format_number(double v);

}  // namespace hle
