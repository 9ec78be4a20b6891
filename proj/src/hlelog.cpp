#include "hle/hlelog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hle/csv.hpp"
#include "hle/errors.hpp"

namespace hle {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<HighLevelLogEntry> build_hlel(const EventLog& log, std::span<const HighLevelEvent> hles,
                                          const CascadeAssignment& assignment, const ThresholdTable& thresholds,
                                          const Framing& framing) {
  if (assignment.ids.size() != hles.size()) throw Error("cascade assignment does not match the high-level events");
  std::vector<HighLevelLogEntry> entries;
  entries.reserve(hles.size());
  for (std::size_t i = 0; i < hles.size(); ++i) {
    const HighLevelEvent& h = hles[i];
    HighLevelLogEntry e;
    e.case_id = assignment.ids[i];
    e.activity = feature_name(log, h.feature);
    e.timestamp = framing.start_of(h.window);
    e.window = h.window;
    e.view = h.feature.view;
    e.component_kind = h.feature.component.kind;
    e.component = component_name(log, h.feature.component);
    e.value = h.value;
    e.threshold = thresholds.threshold(h.feature.view).value_or(0.0);
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const HighLevelLogEntry& a, const HighLevelLogEntry& b) {
    return std::tie(a.case_id, a.window, a.activity) < std::tie(b.case_id, b.window, b.activity);
  });
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].hle_id = i + 1;
  return entries;
}

FlattenOrder::FlattenOrder(std::vector<std::string> listed) : listed_(std::move(listed)) {
  for (std::size_t i = 0; i < listed_.size(); ++i) rank_.try_emplace(listed_[i], i);
}

FlattenOrder FlattenOrder::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open flatten order file '" + path.string() + "'");
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    names.push_back(line);
  }
  return FlattenOrder(std::move(names));
}

bool FlattenOrder::before(const std::string& a, const std::string& b) const {
  const auto ia = rank_.find(a);
  const auto ib = rank_.find(b);
  const bool la = ia != rank_.end();
  const bool lb = ib != rank_.end();
  if (la && lb) return ia->second < ib->second;
  if (la != lb) return la;
  return a < b;
}

std::vector<HighLevelLogEntry> flatten(std::vector<HighLevelLogEntry> entries, const FlattenOrder& order) {
  std::stable_sort(entries.begin(), entries.end(), [&](const HighLevelLogEntry& a, const HighLevelLogEntry& b) {
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    if (a.window != b.window) return a.window < b.window;
    return order.before(a.activity, b.activity);
  });
  return entries;
}

void write_hlel_csv(std::ostream& out, std::span<const HighLevelLogEntry> entries,
                    std::string_view timestamp_format) {
  out << kHlelHeader << '\n';
  for (const auto& e : entries) {
    csv::write_row(out, {std::to_string(e.hle_id), std::to_string(e.case_id), e.activity,
                         format_timestamp(e.timestamp, timestamp_format), std::to_string(e.window),
                         std::string(view_name(e.view)), std::string(kind_name(e.component_kind)), e.component,
                         format_number(e.value), format_number(e.threshold)});
  }
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw RowError(line, std::string("malformed ") + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<HighLevelLogEntry> read_hlel_csv(std::istream& in, std::string_view timestamp_format) {
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw ConfigError("high-level log has no header");
  std::string joined;
  for (std::size_t i = 0; i < header->size(); ++i) joined += (i ? "," : "") + (*header)[i];
  if (joined != kHlelHeader) throw ConfigError("unexpected high-level log header '" + joined + "'");

  std::vector<HighLevelLogEntry> entries;
  while (auto row = reader.next()) {
    const std::size_t line = reader.line();
    const auto& f = *row;
    if (f.size() != 10) throw RowError(line, "expected 10 fields");
    HighLevelLogEntry e;
    e.hle_id = parse_field<std::uint64_t>(f[0], line, "hle_id");
    e.case_id = parse_field<std::uint32_t>(f[1], line, "case");
    e.activity = f[2];
    try {
      e.timestamp = parse_timestamp(f[3], timestamp_format);
    } catch (const ConfigError& err) {
      throw RowError(line, err.what());
    }
    e.window = parse_field<WindowIndex>(f[4], line, "window");
    const auto view = parse_view(f[5]);
    if (!view) throw RowError(line, "unknown view '" + f[5] + "'");
    e.view = *view;
    const auto kind = parse_kind(f[6]);
    if (!kind) throw RowError(line, "unknown component kind '" + f[6] + "'");
    e.component_kind = *kind;
    e.component = f[7];
    e.value = parse_field<double>(f[8], line, "value");
    e.threshold = parse_field<double>(f[9], line, "threshold");
    entries.push_back(std::move(e));
  }
  return entries;
}

DirectlyFollowsGraph discover_dfg(std::span<const HighLevelLogEntry> flattened) {
  DirectlyFollowsGraph g;
  for (std::size_t i = 0; i < flattened.size(); ++i) {
    ++g.nodes[flattened[i].activity];
    if (i > 0 && flattened[i - 1].case_id == flattened[i].case_id) {
      ++g.edges[{flattened[i - 1].activity, flattened[i].activity}];
    }
  }
  return g;
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const DirectlyFollowsGraph& dfg) {
  std::ostringstream out;
  out << "digraph dfg {\n";
  out << "  node [shape=box];\n";
  for (const auto& [name, count] : dfg.nodes) {
    out << "  " << dot_quote(name) << " [label=" << dot_quote(name + " (" + std::to_string(count) + ")") << "];\n";
  }
  for (const auto& [edge, count] : dfg.edges) {
    out << "  " << dot_quote(edge.first) << " -> " << dot_quote(edge.second) << " [label=\"" << count << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dfg(std::span<const HighLevelLogEntry> flattened) { return to_dot(discover_dfg(flattened)); }

namespace {

std::string_view unit_of(View v) {
  switch (v) {
    case View::execute: return "executions";
    case View::perform:
    case View::todo:
    case View::workload: return "tasks";
    case View::delay: return "hours";
    default: return "visits";
  }
}

std::int64_t period_of(TimePoint t, TimePoint origin, Duration period) {
  const std::int64_t off = (t - origin).count();
  std::int64_t q = off / period.count();
  if (off % period.count() != 0 && off < 0) --q;
  return q;
}

}  // namespace

SummaryTable summarize(const EventLog& log, std::span<const HighLevelLogEntry> entries, TimePoint origin,
                       Duration period, std::vector<std::string> activities) {
  if (period.count() <= 0) throw ConfigError("summary period must be positive");
  SummaryTable table;

  std::map<std::string, std::size_t> frequency;
  std::map<std::string, View> view_of;
  for (const auto& e : entries) {
    ++frequency[e.activity];
    view_of.try_emplace(e.activity, e.view);
  }
  if (activities.empty()) {
    std::vector<std::pair<std::string, std::size_t>> ranked(frequency.begin(), frequency.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < ranked.size() && i < 4; ++i) activities.push_back(ranked[i].first);
  }
  for (const auto& a : activities) {
    const auto it = view_of.find(a);
    std::string unit = "value";
    if (it != view_of.end()) {
      unit = std::string(unit_of(it->second));
    } else if (const auto dash = a.find('-'); dash != std::string::npos) {
      if (const auto v = parse_view(std::string_view(a).substr(0, dash))) unit = std::string(unit_of(*v));
    }
    table.columns.push_back({a, unit});
  }

  if (log.empty() && entries.empty()) return table;
  std::int64_t first = INT64_MAX, last = INT64_MIN;
  auto extend = [&](TimePoint t) {
    const auto p = period_of(t, origin, period);
    first = std::min(first, p);
    last = std::max(last, p);
  };
  if (!log.empty()) {
    extend(log.min_time());
    extend(log.max_time());
  }
  for (const auto& e : entries) extend(e.timestamp);

  const auto n_periods = static_cast<std::size_t>(last - first + 1);
  const std::size_t n_cols = table.columns.size();
  std::vector<std::vector<double>> sums(n_periods, std::vector<double>(n_cols, 0.0));
  table.rows.resize(n_periods);
  for (std::size_t k = 0; k < n_periods; ++k) {
    auto& row = table.rows[k];
    row.period = first + static_cast<std::int64_t>(k) + 1;
    row.start = origin + (first + static_cast<std::int64_t>(k)) * period;
    row.counts.assign(n_cols, 0);
  }
  for (const Event& ev : log.events()) {
    ++table.rows[static_cast<std::size_t>(period_of(ev.time, origin, period) - first)].events;
  }
  std::map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < n_cols; ++c) column_of.try_emplace(table.columns[c].activity, c);
  for (const auto& e : entries) {
    const auto k = static_cast<std::size_t>(period_of(e.timestamp, origin, period) - first);
    ++table.rows[k].hles;
    const auto it = column_of.find(e.activity);
    if (it == column_of.end()) continue;
    ++table.rows[k].counts[it->second];
    sums[k][it->second] += e.view == View::delay ? e.value / 3600.0 : e.value;
  }
  for (std::size_t k = 0; k < n_periods; ++k) {
    auto& row = table.rows[k];
    row.avgs.resize(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (row.counts[c] > 0) row.avgs[c] = sums[k][c] / static_cast<double>(row.counts[c]);
    }
  }
  return table;
}

void write_summary_csv(std::ostream& out, const SummaryTable& table, std::string_view timestamp_format) {
  std::vector<std::string> header = {"period", "start", "events", "hles"};
  for (const auto& c : table.columns) {
    header.push_back(c.activity + " count");
    header.push_back(c.activity + " avg (" + c.unit + ")");
  }
  csv::write_row(out, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields = {std::to_string(row.period), format_timestamp(row.start, timestamp_format),
                                       std::to_string(row.events), std::to_string(row.hles)};
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      fields.push_back(std::to_string(row.counts[c]));
      fields.push_back(row.avgs[c] ? format_number(*row.avgs[c]) : std::string());
    }
    csv::write_row(out, fields);
  }
}

}  // namespace hle
