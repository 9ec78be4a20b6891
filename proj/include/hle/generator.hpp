#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/time.hpp"

namespace hle {

// Range of a uniform draw, in minutes.
struct MinuteRange {
  double min = 0.0;
  double max = 0.0;
};

struct WeekSpec {
  // Weeks without arrivals produce no new cases.
  bool arrivals = true;
  MinuteRange interarrival;
};

// Service-desk scenario: cases `request` -> {answer, report} handled by one
// agent -> optional `follow` when the customer's patience runs out before
// the answer starts, repeated while it keeps waiting. The batching resource files every pending report before
// answering once its queue exceeds the threshold.
struct ScenarioConfig {
  TimePoint start = parse_timestamp("2024-01-01T00:00:00");
  std::vector<WeekSpec> weeks;
  MinuteRange report_service{2.0, 5.0};
  MinuteRange answer_service{2.0, 5.0};
  // Extra answer work caused by each follow-up question.
  MinuteRange follow_handling{0.25, 0.75};
  MinuteRange impatient_patience{15.0, 60.0};
  MinuteRange patient_patience{180.0, 300.0};
  double impatient_share = 0.5;
  std::string batching_resource = "Jane";
  std::vector<std::string> coworkers{"Alice", "Bob"};
  // Probability that a new case is routed to the batching resource.
  double batching_resource_share = 0.5;
  std::size_t batching_threshold = 5;
  bool batching_enabled = true;
  // A waiting customer asks again after every further patience period.
  std::size_t max_follow_ups = 3;
  std::uint64_t seed = 42;

  // Seven weeks; weeks 2, 3 and 6 busy (3-5 min between cases), the rest
  // quiet (10-15 min).
  static ScenarioConfig defaults();

  // Throws ConfigError on non-positive durations, empty or inverted ranges,
  // shares outside [0,1] or a missing roster.
  void validate() const;

  // JSON object with the field names above; absent keys keep defaults.
  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;
};

EventLog generate(const ScenarioConfig& config);

// case,activity,timestamp,resource in log order.
void write_event_log_csv(std::ostream& out, const EventLog& log, std::string_view timestamp_format = kIsoFormat);

}  // namespace hle
