#include "hle/generator.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "hle/csv.hpp"
#include "hle/errors.hpp"

namespace hle {

namespace {

using json = nlohmann::json;
using Seconds = std::int64_t;

constexpr Seconds kWeek = 7 * 24 * 3600;

void check_range(const MinuteRange& r, const char* name) {
  if (!(r.min > 0.0) || !(r.max >= r.min) || !std::isfinite(r.max)) {
    throw ConfigError(std::string("invalid range for '") + name + "'");
  }
}

Seconds draw_seconds(std::mt19937_64& rng, const MinuteRange& r) {
  std::uniform_real_distribution<double> dist(r.min, r.max);
  return std::max<Seconds>(1, std::llround(dist(rng) * 60.0));
}

json range_to_json(const MinuteRange& r) { return json::array({r.min, r.max}); }

MinuteRange range_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string("'") + name + "' must be [min, max]");
  return {j[0].get<double>(), j[1].get<double>()};
}

enum class TaskKind { report, answer };

struct Task {
  std::size_t case_index;
  TaskKind kind;
};

struct CaseState {
  Seconds arrival = 0;
  std::size_t agent = 0;
  Seconds report_service = 0;
  Seconds answer_service = 0;
  Seconds follow_extra = 0;
  Seconds patience = 0;
  bool answer_started = false;
  std::size_t follow_ups = 0;
  Seconds report_time = -1;
};

struct Agent {
  std::deque<Task> queue;
  bool busy = false;
  Task current{};
};

enum class Kind { arrival, completion, follow_check };

struct SimEvent {
  Seconds time;
  std::uint64_t seq;
  Kind kind;
  std::size_t target;  // case index or agent index

  bool operator>(const SimEvent& o) const { return std::tie(time, seq) > std::tie(o.time, o.seq); }
};

}  // namespace

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig c;
  const WeekSpec quiet{true, {10.0, 15.0}};
  const WeekSpec busy{true, {3.0, 5.0}};
  c.weeks = {quiet, busy, busy, quiet, quiet, busy, quiet};
  return c;
}

void ScenarioConfig::validate() const {
  if (weeks.empty()) throw ConfigError("scenario needs at least one week");
  for (std::size_t i = 0; i < weeks.size(); ++i) {
    if (weeks[i].arrivals) check_range(weeks[i].interarrival, "interarrival");
  }
  check_range(report_service, "report_service");
  check_range(answer_service, "answer_service");
  check_range(follow_handling, "follow_handling");
  check_range(impatient_patience, "impatient_patience");
  check_range(patient_patience, "patient_patience");
  if (!(impatient_share >= 0.0 && impatient_share <= 1.0)) throw ConfigError("impatient_share must lie in [0,1]");
  if (!(batching_resource_share >= 0.0 && batching_resource_share <= 1.0)) {
    throw ConfigError("batching_resource_share must lie in [0,1]");
  }
  if (batching_resource.empty()) throw ConfigError("batching_resource must be named");
  for (const auto& c : coworkers) {
    if (c.empty() || c == batching_resource) throw ConfigError("invalid coworker name '" + c + "'");
  }
  if (coworkers.empty() && batching_resource_share < 1.0) {
    throw ConfigError("no coworkers to route the remaining cases to");
  }
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  ScenarioConfig c = defaults();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario config: ") + e.what());
  }
  try {
    if (j.contains("start")) c.start = parse_timestamp(j["start"].get<std::string>());
    if (j.contains("weeks")) {
      c.weeks.clear();
      for (const auto& w : j["weeks"]) {
        if (w.is_null()) {
          c.weeks.push_back({false, {}});
        } else {
          c.weeks.push_back({true, range_from_json(w, "weeks[]")});
        }
      }
    }
    if (j.contains("report_service")) c.report_service = range_from_json(j["report_service"], "report_service");
    if (j.contains("answer_service")) c.answer_service = range_from_json(j["answer_service"], "answer_service");
    if (j.contains("follow_handling")) c.follow_handling = range_from_json(j["follow_handling"], "follow_handling");
    if (j.contains("impatient_patience")) {
      c.impatient_patience = range_from_json(j["impatient_patience"], "impatient_patience");
    }
    if (j.contains("patient_patience")) c.patient_patience = range_from_json(j["patient_patience"], "patient_patience");
    if (j.contains("impatient_share")) c.impatient_share = j["impatient_share"].get<double>();
    if (j.contains("batching_resource")) c.batching_resource = j["batching_resource"].get<std::string>();
    if (j.contains("coworkers")) c.coworkers = j["coworkers"].get<std::vector<std::string>>();
    if (j.contains("batching_resource_share")) c.batching_resource_share = j["batching_resource_share"].get<double>();
    if (j.contains("batching_threshold")) c.batching_threshold = j["batching_threshold"].get<std::size_t>();
    if (j.contains("batching_enabled")) c.batching_enabled = j["batching_enabled"].get<bool>();
    if (j.contains("max_follow_ups")) c.max_follow_ups = j["max_follow_ups"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario config: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["start"] = format_timestamp(start);
  j["weeks"] = json::array();
  for (const auto& w : weeks) j["weeks"].push_back(w.arrivals ? range_to_json(w.interarrival) : json(nullptr));
  j["report_service"] = range_to_json(report_service);
  j["answer_service"] = range_to_json(answer_service);
  j["follow_handling"] = range_to_json(follow_handling);
  j["impatient_patience"] = range_to_json(impatient_patience);
  j["patient_patience"] = range_to_json(patient_patience);
  j["impatient_share"] = impatient_share;
  j["batching_resource"] = batching_resource;
  j["coworkers"] = coworkers;
  j["batching_resource_share"] = batching_resource_share;
  j["batching_threshold"] = batching_threshold;
  j["batching_enabled"] = batching_enabled;
  j["max_follow_ups"] = max_follow_ups;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

EventLog generate(const ScenarioConfig& config) {
  config.validate();

  // Arrival times and per-case draws use separate streams so that changing
  // the agents' behaviour leaves the workload itself untouched.
  std::seed_seq arrival_seed{config.seed, std::uint64_t{1}};
  std::seed_seq case_seed{config.seed, std::uint64_t{2}};
  std::mt19937_64 arrival_rng(arrival_seed);
  std::mt19937_64 case_rng(case_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::string> roster{config.batching_resource};
  roster.insert(roster.end(), config.coworkers.begin(), config.coworkers.end());

  std::vector<CaseState> cases;
  std::vector<Seconds> arrivals;
  Seconds t = 0;
  for (std::size_t w = 0; w < config.weeks.size(); ++w) {
    const Seconds week_start = static_cast<Seconds>(w) * kWeek;
    const Seconds week_end = week_start + kWeek;
    t = std::max(t, week_start);
    if (!config.weeks[w].arrivals) continue;
    while (true) {
      t += draw_seconds(arrival_rng, config.weeks[w].interarrival);
      if (t >= week_end) break;
      arrivals.push_back(t);
    }
  }

  cases.reserve(arrivals.size());
  for (const Seconds a : arrivals) {
    CaseState c;
    c.arrival = a;
    if (unit(case_rng) < config.batching_resource_share || config.coworkers.empty()) {
      c.agent = 0;
    } else {
      c.agent = 1 + std::min(config.coworkers.size() - 1,
                             static_cast<std::size_t>(unit(case_rng) * static_cast<double>(config.coworkers.size())));
    }
    c.report_service = draw_seconds(case_rng, config.report_service);
    c.answer_service = draw_seconds(case_rng, config.answer_service);
    c.follow_extra = draw_seconds(case_rng, config.follow_handling);
    const bool impatient = unit(case_rng) < config.impatient_share;
    c.patience = draw_seconds(case_rng, impatient ? config.impatient_patience : config.patient_patience);
    cases.push_back(c);
  }

  struct Emitted {
    std::size_t case_index;
    const char* activity;
    Seconds time;
  };
  std::vector<Emitted> emitted;
  emitted.reserve(cases.size() * 4);

  std::vector<Agent> agents(roster.size());
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> pending;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) pending.push({cases[i].arrival, seq++, Kind::arrival, i});

  auto start_next = [&](std::size_t agent_index, Seconds now) {
    Agent& agent = agents[agent_index];
    if (agent.busy || agent.queue.empty()) return;
    auto pick = agent.queue.begin();
    if (agent_index == 0 && config.batching_enabled && agent.queue.size() > config.batching_threshold) {
      const auto report = std::find_if(agent.queue.begin(), agent.queue.end(),
                                       [](const Task& task) { return task.kind == TaskKind::report; });
      if (report != agent.queue.end()) pick = report;
    }
    const Task task = *pick;
    agent.queue.erase(pick);
    CaseState& c = cases[task.case_index];
    Seconds service = c.report_service;
    if (task.kind == TaskKind::answer) {
      c.answer_started = true;
      service = c.answer_service + static_cast<Seconds>(c.follow_ups) * c.follow_extra;
    }
    agent.busy = true;
    agent.current = task;
    pending.push({now + service, seq++, Kind::completion, agent_index});
  };

  while (!pending.empty()) {
    const SimEvent ev = pending.top();
    pending.pop();
    switch (ev.kind) {
      case Kind::arrival: {
        CaseState& c = cases[ev.target];
        emitted.push_back({ev.target, "request", ev.time});
        agents[c.agent].queue.push_back({ev.target, TaskKind::answer});
        agents[c.agent].queue.push_back({ev.target, TaskKind::report});
        pending.push({ev.time + c.patience, seq++, Kind::follow_check, ev.target});
        start_next(c.agent, ev.time);
        break;
      }
      case Kind::completion: {
        Agent& agent = agents[ev.target];
        const Task task = agent.current;
        agent.busy = false;
        const bool is_report = task.kind == TaskKind::report;
        emitted.push_back({task.case_index, is_report ? "report" : "answer", ev.time});
        if (is_report) cases[task.case_index].report_time = ev.time;
        start_next(ev.target, ev.time);
        break;
      }
      case Kind::follow_check: {
        CaseState& c = cases[ev.target];
        if (!c.answer_started && c.follow_ups < config.max_follow_ups) {
          ++c.follow_ups;
          emitted.push_back({ev.target, "follow", ev.time});
          pending.push({ev.time + c.patience, seq++, Kind::follow_check, ev.target});
        }
        break;
      }
    }
  }

  // A follow-up landing on the same second as the report moves one second
  // later; the answer cannot start before the follow-up, so order holds.
  std::vector<EventRecord> records;
  records.reserve(emitted.size());
  for (const Emitted& e : emitted) {
    const CaseState& c = cases[e.case_index];
    Seconds time = e.time;
    if (std::string_view(e.activity) == "follow" && time == c.report_time) ++time;
    char id[32];
    std::snprintf(id, sizeof(id), "case-%06zu", e.case_index + 1);
    records.push_back({id, e.activity, config.start + std::chrono::seconds(time), roster[c.agent]});
  }
  return EventLog::from_records(std::move(records), Provenance{"generated", ColumnMapping{}, std::string(kIsoFormat)});
}

void write_event_log_csv(std::ostream& out, const EventLog& log, std::string_view timestamp_format) {
  const ColumnMapping columns;
  csv::write_row(out, {columns.case_column, columns.activity_column, columns.timestamp_column,
                       columns.resource_column});
  for (const Event& e : log.events()) {
    csv::write_row(out, {log.case_name(e.case_code), log.activity_name(e.activity),
                         format_timestamp(e.time, timestamp_format), log.resource_name(e.resource)});
  }
}

}  // namespace hle
