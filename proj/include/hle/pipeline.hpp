#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/features.hpp"
#include "hle/framing.hpp"
#include "hle/hlelog.hpp"
#include "hle/linkage.hpp"

namespace hle {

struct RunConfig {
  std::filesystem::path input;
  ColumnMapping mapping;
  std::string timestamp_format = std::string(kIsoFormat);
  Duration window_width = std::chrono::days(1);
  // nullopt anchors windows at midnight of the first event's day.
  std::optional<TimePoint> origin;
  double percentile = 0.8;
  double lambda = 0.5;
  FeatureSelection selection;
  bool exclude_zeros = false;
  // Empty means lexicographic.
  std::filesystem::path flatten_order;
  Duration summary_period = std::chrono::weeks(1);
  std::vector<std::string> summary_activities;
  bool include_zero_links = false;
  bool dump_matrix = false;
  unsigned threads = 0;

  // Throws ConfigError unless p and lambda lie in [0,1] and widths are
  // positive.
  void validate() const;

  // Effective configuration. The output directory is not part of it.
  std::string to_json_text() const;
  // Absent keys keep their defaults.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
};

struct AnalysisResult {
  Framing framing{TimePoint{}, Duration{1}};
  WindowSet windows;
  EvaluationMatrix matrix;
  ThresholdTable thresholds;
  std::vector<HighLevelEvent> hles;
  std::vector<std::string> hle_names;  // feature name per high-level event
  LinkTable links;
  CascadeAssignment cascades;
  std::vector<HighLevelLogEntry> entries;
  std::vector<HighLevelLogEntry> flattened;
};

// frame -> evaluate -> threshold -> link -> cascade -> high-level log.
// Throws Error("no events") on an empty log.
AnalysisResult analyze(const EventLog& log, const RunConfig& config);

// File name -> contents, ready to be written.
using Artifacts = std::map<std::string, std::string>;

std::string render_links_csv(const EventLog& log, const LinkTable& links, bool include_zeros);
std::string render_matrix_csv(const EventLog& log, const EvaluationMatrix& matrix);

// hlel.csv, links.csv, summary.csv, dfg.dot, config.json and, when asked
// for, matrix.csv.
Artifacts render_artifacts(const EventLog& log, const AnalysisResult& result, const RunConfig& config);

// Creates `dir` if needed; writes each file through a temporary name.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts);

struct RunSummary {
  std::size_t events = 0;
  std::size_t windows = 0;
  std::size_t hles = 0;
  std::size_t cascades = 0;
  std::vector<std::string> warnings;
};

// ingest -> analyze -> render -> write. Nothing is written unless every
// earlier stage succeeded.
RunSummary run_analyze(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace hle
