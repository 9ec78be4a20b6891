// Command-line front end: analyze, generate, links, summary, dfg.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hle/errors.hpp"
#include "hle/generator.hpp"
#include "hle/hlelog.hpp"
#include "hle/kernels.hpp"
#include "hle/pipeline.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

// Raw flag values; only those given on the command line override a loaded
// config file.
struct AnalysisFlags {
  std::string config_file;
  std::string input;
  std::string case_col, activity_col, timestamp_col, resource_col;
  std::string timestamp_format;
  std::string window_width;
  std::string origin;
  double percentile = 0.0;
  double lambda = 0.0;
  std::string views;
  std::vector<std::string> components;
  bool exclude_zeros = false;
  std::string flatten_order;
  std::string summary_period;
  std::vector<std::string> summary_activities;
  bool include_zero_links = false;
  unsigned threads = 0;
  std::string kernels = "auto";

  CLI::App* app = nullptr;

  bool set(const std::string& name) const {
    const CLI::Option* opt = app->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  }
};

void add_input_flags(CLI::App& cmd, AnalysisFlags& f) {
  f.app = &cmd;
  cmd.add_option("--config", f.config_file, "Run configuration (JSON) to start from");
  cmd.add_option("--input,-i", f.input, "Input event log (CSV)");
  cmd.add_option("--case-col", f.case_col, "Case column name (default: case)");
  cmd.add_option("--activity-col", f.activity_col, "Activity column name (default: activity)");
  cmd.add_option("--timestamp-col", f.timestamp_col, "Timestamp column name (default: timestamp)");
  cmd.add_option("--resource-col", f.resource_col, "Resource column name (default: resource)");
  cmd.add_option("--timestamp-format", f.timestamp_format, "strptime format (default: %Y-%m-%dT%H:%M:%S)");
}

void add_analysis_flags(CLI::App& cmd, AnalysisFlags& f) {
  add_input_flags(cmd, f);
  cmd.add_option("--window-width", f.window_width, "Window width, e.g. 30m, 1h, 1d (default: 1d)");
  cmd.add_option("--origin", f.origin, "Window origin timestamp or 'auto' (default: auto)");
  cmd.add_option("--percentile,-p", f.percentile, "Threshold percentile in [0,1] (default: 0.8)");
  cmd.add_option("--lambda", f.lambda, "Propagation threshold in [0,1] (default: 0.5)");
  cmd.add_option("--views", f.views, "Comma-separated views (default: all)");
  cmd.add_option("--component", f.components, "Restrict to this component name (repeatable)");
  cmd.add_flag("--exclude-zeros", f.exclude_zeros, "Leave zero measurements out of threshold pools");
  cmd.add_option("--flatten-order", f.flatten_order, "File listing high-level activities in flatten order");
  cmd.add_option("--summary-period", f.summary_period, "Summary period (default: 1w)");
  cmd.add_option("--summary-activity", f.summary_activities, "High-level activity to summarize (repeatable)");
  cmd.add_flag("--include-zeros", f.include_zero_links, "Also list zero-valued links");
  cmd.add_option("--threads", f.threads, "Worker threads for feature evaluation (0 = all cores)");
  cmd.add_option("--kernels", f.kernels, "Window kernels: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

hle::RunConfig resolve(const AnalysisFlags& f) {
  hle::RunConfig c = f.config_file.empty() ? hle::RunConfig{} : hle::RunConfig::load(f.config_file);
  if (f.set("--input")) c.input = f.input;
  if (f.set("--case-col")) c.mapping.case_column = f.case_col;
  if (f.set("--activity-col")) c.mapping.activity_column = f.activity_col;
  if (f.set("--timestamp-col")) c.mapping.timestamp_column = f.timestamp_col;
  if (f.set("--resource-col")) c.mapping.resource_column = f.resource_col;
  if (f.set("--timestamp-format")) c.timestamp_format = f.timestamp_format;
  if (f.set("--window-width")) c.window_width = hle::parse_duration(f.window_width);
  if (f.set("--origin")) {
    if (f.origin == "auto") {
      c.origin.reset();
    } else {
      c.origin = hle::parse_timestamp(f.origin, c.timestamp_format);
    }
  }
  if (f.set("--percentile")) c.percentile = f.percentile;
  if (f.set("--lambda")) c.lambda = f.lambda;
  if (f.set("--views")) c.selection.views = hle::parse_views(f.views);
  if (f.set("--component")) c.selection.components = f.components;
  if (f.set("--exclude-zeros")) c.exclude_zeros = f.exclude_zeros;
  if (f.set("--flatten-order")) c.flatten_order = f.flatten_order;
  if (f.set("--summary-period")) c.summary_period = hle::parse_duration(f.summary_period);
  if (f.set("--summary-activity")) c.summary_activities = f.summary_activities;
  if (f.set("--include-zeros")) c.include_zero_links = f.include_zero_links;
  if (f.set("--threads")) c.threads = f.threads;
  c.validate();
  if (c.input.empty()) throw hle::ConfigError("no input file given (--input)");
  if (f.kernels == "scalar") hle::kernels::set_active_isa(hle::kernels::Isa::scalar);
  if (f.kernels == "avx2") hle::kernels::set_active_isa(hle::kernels::Isa::avx2);
  return c;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  hle::write_artifacts(std::filesystem::path(out_path).parent_path().empty()
                           ? std::filesystem::path(".")
                           : std::filesystem::path(out_path).parent_path(),
                       {{std::filesystem::path(out_path).filename().string(), text}});
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect congestion-related high-level events in an event log and correlate them into cascades"};
  app.require_subcommand(1);

  AnalysisFlags analyze_flags;
  std::string analyze_out;
  bool dump_matrix = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and write all artifacts");
  add_analysis_flags(*analyze, analyze_flags);
  analyze->add_option("--out,-o", analyze_out, "Output directory")->required();
  analyze->add_flag("--dump-matrix", dump_matrix, "Also write the evaluation matrix (matrix.csv)");

  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Simulate the service-desk scenario");
  auto* seed_opt = generate->add_option("--seed", gen_seed, "RNG seed (overrides the config)");
  generate->add_option("--config", gen_config, "Scenario configuration (JSON)");
  generate->add_option("--out,-o", gen_out, "Output CSV (default: stdout)");

  AnalysisFlags links_flags;
  std::string links_out;
  auto* links = app.add_subcommand("links", "Print the component link table as CSV");
  add_input_flags(*links, links_flags);
  bool links_zeros = false;
  links->add_flag("--include-zeros", links_zeros, "Also list zero-valued links");
  links->add_option("--out,-o", links_out, "Output CSV (default: stdout)");

  AnalysisFlags summary_flags;
  std::string summary_out;
  auto* summary = app.add_subcommand("summary", "Per-period summary of the high-level event log");
  add_analysis_flags(*summary, summary_flags);
  summary->add_option("--out,-o", summary_out, "Output CSV (default: stdout)");

  AnalysisFlags dfg_flags;
  std::string dfg_out, dfg_hlel;
  auto* dfg = app.add_subcommand("dfg", "Directly-follows graph of the flattened high-level log (DOT)");
  add_analysis_flags(*dfg, dfg_flags);
  dfg->add_option("--hlel", dfg_hlel, "Read an existing hlel.csv instead of analyzing an input log");
  dfg->add_option("--out,-o", dfg_out, "Output DOT file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*analyze) {
      hle::RunConfig config = resolve(analyze_flags);
      config.dump_matrix = config.dump_matrix || dump_matrix;
      const auto s = hle::run_analyze(config, analyze_out);
      print_warnings(s.warnings);
      std::cout << "events: " << s.events << "\nwindows: " << s.windows << "\nhigh-level events: " << s.hles
                << "\ncascades: " << s.cascades << '\n';
    } else if (*generate) {
      hle::ScenarioConfig config =
          gen_config.empty() ? hle::ScenarioConfig::defaults() : hle::ScenarioConfig::load(gen_config);
      if (seed_opt->count() > 0) config.seed = gen_seed;
      const hle::EventLog log = hle::generate(config);
      std::ostringstream out;
      hle::write_event_log_csv(out, log);
      emit(out.str(), gen_out);
      std::cerr << "generated " << log.size() << " events in " << log.cases().size() << " cases\n";
    } else if (*links) {
      links_flags.app = links;
      hle::RunConfig config = resolve(links_flags);
      const hle::EventLog log = hle::ingest_csv(config.input, config.mapping, config.timestamp_format);
      const hle::LogIndex index(log);
      emit(hle::render_links_csv(log, hle::LinkTable::build(index), links_zeros), links_out);
    } else if (*summary) {
      const hle::RunConfig config = resolve(summary_flags);
      const hle::EventLog log = hle::ingest_csv(config.input, config.mapping, config.timestamp_format);
      const auto result = hle::analyze(log, config);
      print_warnings(result.thresholds.warnings);
      emit(hle::render_artifacts(log, result, config).at("summary.csv"), summary_out);
    } else if (*dfg) {
      if (!dfg_hlel.empty()) {
        std::ifstream in(dfg_hlel);
        if (!in) throw hle::Error("cannot open '" + dfg_hlel + "'");
        const std::string fmt = dfg_flags.set("--timestamp-format") ? dfg_flags.timestamp_format
                                                                     : std::string(hle::kIsoFormat);
        const hle::FlattenOrder order =
            dfg_flags.flatten_order.empty() ? hle::FlattenOrder{} : hle::FlattenOrder::load(dfg_flags.flatten_order);
        emit(hle::export_dfg(hle::flatten(hle::read_hlel_csv(in, fmt), order)), dfg_out);
      } else {
        const hle::RunConfig config = resolve(dfg_flags);
        const hle::EventLog log = hle::ingest_csv(config.input, config.mapping, config.timestamp_format);
        const auto result = hle::analyze(log, config);
        print_warnings(result.thresholds.warnings);
        emit(hle::export_dfg(result.flattened), dfg_out);
      }
    }
  } catch (const hle::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
