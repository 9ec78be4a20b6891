#include "hle/pipeline.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hle/csv.hpp"
#include "hle/errors.hpp"

namespace hle {

namespace {

using json = nlohmann::json;

std::string views_text(const std::vector<View>& views) {
  std::string out;
  for (View v : views) {
    if (!out.empty()) out += ',';
    out += view_name(v);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(percentile >= 0.0 && percentile <= 1.0)) throw ConfigError("percentile must lie in [0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0,1]");
  if (window_width.count() <= 0) throw ConfigError("window width must be positive");
  if (summary_period.count() <= 0) throw ConfigError("summary period must be positive");
  if (selection.views.empty()) throw ConfigError("no views selected");
}

std::string RunConfig::to_json_text() const {
  json j;
  j["input"] = input.string();
  j["columns"] = {{"case", mapping.case_column},
                  {"activity", mapping.activity_column},
                  {"timestamp", mapping.timestamp_column},
                  {"resource", mapping.resource_column}};
  j["timestamp_format"] = timestamp_format;
  j["window_width"] = format_duration(window_width);
  j["origin"] = origin ? format_timestamp(*origin, timestamp_format) : std::string("auto");
  j["percentile"] = percentile;
  j["lambda"] = lambda;
  j["views"] = views_text(selection.views);
  j["components"] = selection.components;
  j["exclude_zeros"] = exclude_zeros;
  j["flatten_order"] = flatten_order.string();
  j["summary_period"] = format_duration(summary_period);
  j["summary_activities"] = summary_activities;
  j["include_zero_links"] = include_zero_links;
  j["dump_matrix"] = dump_matrix;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  try {
    if (j.contains("input")) c.input = j["input"].get<std::string>();
    if (j.contains("columns")) {
      const auto& cols = j["columns"];
      if (cols.contains("case")) c.mapping.case_column = cols["case"].get<std::string>();
      if (cols.contains("activity")) c.mapping.activity_column = cols["activity"].get<std::string>();
      if (cols.contains("timestamp")) c.mapping.timestamp_column = cols["timestamp"].get<std::string>();
      if (cols.contains("resource")) c.mapping.resource_column = cols["resource"].get<std::string>();
    }
    if (j.contains("timestamp_format")) c.timestamp_format = j["timestamp_format"].get<std::string>();
    if (j.contains("window_width")) c.window_width = parse_duration(j["window_width"].get<std::string>());
    if (j.contains("origin")) {
      const auto o = j["origin"].get<std::string>();
      if (o == "auto") {
        c.origin.reset();
      } else {
        c.origin = parse_timestamp(o, c.timestamp_format);
      }
    }
    if (j.contains("percentile")) c.percentile = j["percentile"].get<double>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("views")) c.selection.views = parse_views(j["views"].get<std::string>());
    if (j.contains("components")) c.selection.components = j["components"].get<std::vector<std::string>>();
    if (j.contains("exclude_zeros")) c.exclude_zeros = j["exclude_zeros"].get<bool>();
    if (j.contains("flatten_order")) c.flatten_order = j["flatten_order"].get<std::string>();
    if (j.contains("summary_period")) c.summary_period = parse_duration(j["summary_period"].get<std::string>());
    if (j.contains("summary_activities")) {
      c.summary_activities = j["summary_activities"].get<std::vector<std::string>>();
    }
    if (j.contains("include_zero_links")) c.include_zero_links = j["include_zero_links"].get<bool>();
    if (j.contains("dump_matrix")) c.dump_matrix = j["dump_matrix"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

AnalysisResult analyze(const EventLog& log, const RunConfig& config) {
  config.validate();
  if (log.empty()) throw Error("no events");

  AnalysisResult r;
  r.framing = config.origin ? Framing(*config.origin, config.window_width)
                            : Framing::anchored_at_first_day(log, config.window_width);
  r.windows = window_set(r.framing, log);

  const LogIndex index(log);
  const FeatureEvaluator evaluator(index, r.framing);
  r.matrix = evaluator.matrix(r.windows, config.selection, config.threads);
  r.thresholds = compute_thresholds(r.matrix, config.percentile, config.exclude_zeros);
  r.hles = generate_hles(r.matrix, r.thresholds);
  r.hle_names.reserve(r.hles.size());
  for (const auto& h : r.hles) r.hle_names.push_back(feature_name(log, h.feature));

  r.links = LinkTable::build(index);
  r.cascades = cascades(r.hles, r.hle_names, r.links, config.lambda);
  r.entries = build_hlel(log, r.hles, r.cascades, r.thresholds, r.framing);

  const FlattenOrder order = config.flatten_order.empty() ? FlattenOrder{} : FlattenOrder::load(config.flatten_order);
  r.flattened = flatten(r.entries, order);
  return r;
}

std::string render_links_csv(const EventLog& log, const LinkTable& links, bool include_zeros) {
  std::ostringstream out;
  csv::write_row(out, {"kind1", "component1", "kind2", "component2", "link"});
  auto row = [&](Component a, Component b, double v) {
    csv::write_row(out, {std::string(kind_name(a.kind)), component_name(log, a), std::string(kind_name(b.kind)),
                         component_name(log, b), format_number(v)});
  };
  if (include_zeros) {
    const auto& comps = links.components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (std::size_t j = i + 1; j < comps.size(); ++j) row(comps[i], comps[j], links(comps[i], comps[j]));
    }
  } else {
    for (const auto& [pair, v] : links.nonzero()) row(pair.first, pair.second, v);
  }
  return out.str();
}

std::string render_matrix_csv(const EventLog& log, const EvaluationMatrix& matrix) {
  std::ostringstream out;
  csv::write_row(out, {"view", "component", "window", "value"});
  for (const auto& row : matrix.rows()) {
    const std::string view(view_name(row.feature.view));
    const std::string comp = component_name(log, row.feature.component);
    for (std::size_t k = 0; k < row.values.size(); ++k) {
      if (!row.values[k]) continue;
      csv::write_row(out, {view, comp, std::to_string(matrix.windows().first + static_cast<WindowIndex>(k)),
                           format_number(*row.values[k])});
    }
  }
  return out.str();
}

Artifacts render_artifacts(const EventLog& log, const AnalysisResult& result, const RunConfig& config) {
  const std::string_view fmt = config.timestamp_format;
  Artifacts files;

  std::ostringstream hlel;
  write_hlel_csv(hlel, result.entries, fmt);
  files["hlel.csv"] = hlel.str();

  files["links.csv"] = render_links_csv(log, result.links, config.include_zero_links);

  const SummaryTable summary =
      summarize(log, result.entries, result.framing.origin(), config.summary_period, config.summary_activities);
  std::ostringstream sum;
  write_summary_csv(sum, summary, fmt);
  files["summary.csv"] = sum.str();

  files["dfg.dot"] = export_dfg(result.flattened);
  files["config.json"] = config.to_json_text();
  if (config.dump_matrix) files["matrix.csv"] = render_matrix_csv(log, result.matrix);
  return files;
}

void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : artifacts) {
    const auto target = dir / name;
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write '" + tmp.string() + "'");
      out << contents;
      if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
  }
}

RunSummary run_analyze(const RunConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const EventLog log = ingest_csv(config.input, config.mapping, config.timestamp_format);
  if (log.empty()) throw Error("no events");
  const AnalysisResult result = analyze(log, config);
  const Artifacts files = render_artifacts(log, result, config);
  write_artifacts(out_dir, files);

  RunSummary s;
  s.events = log.size();
  s.windows = result.windows.size();
  s.hles = result.hles.size();
  s.cascades = result.cascades.count;
  s.warnings = result.thresholds.warnings;
  return s;
}

}  // namespace hle
