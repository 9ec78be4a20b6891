#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "checks.hpp"
#include "hle/errors.hpp"
#include "hle/generator.hpp"
#include "hle/pipeline.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace hle;
using namespace std::chrono;
using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

const char* kLogTCsv =
    "case,activity,timestamp,resource\n"
    "c1,a,1970-01-01T00:00:00,r1\nc1,b,1970-01-01T00:00:10,r2\nc1,c,1970-01-01T00:00:20,r1\n"
    "c2,a,1970-01-01T00:00:05,r1\nc2,b,1970-01-01T00:00:25,r2\nc2,c,1970-01-01T00:00:40,r1\n";

RunConfig log_t_config(const std::filesystem::path& input) {
  RunConfig c;
  c.input = input;
  c.window_width = seconds(20);
  c.origin = TimePoint{};
  c.percentile = 0.0;
  c.lambda = 0.0;
  return c;
}

int run_cli(const std::string& args, const std::filesystem::path& log_to) {
  const std::string cmd = std::string(HLE_CLI_PATH) + " " + args + " >" + log_to.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Pipeline, LogTEverythingFires) {
  TempDir dir;
  write_file(dir / "t.csv", kLogTCsv);
  const RunConfig config = log_t_config(dir / "t.csv");
  const EventLog log = ingest_csv(config.input);
  const AnalysisResult r = analyze(log, config);
  std::size_t defined = 0;
  for (const auto& row : r.matrix.rows()) {
    for (const auto& v : row.values) defined += v.has_value();
  }
  EXPECT_EQ(r.hles.size(), defined);
  EXPECT_EQ(r.windows.size(), 3u);

  // cascades against the oracle pipeline: oracle links, BFS closure
  const oracle::Log olog(oracle::log_t_records());
  const oracle::Links ol(olog);
  std::vector<oracle::CascadeInput> in;
  std::vector<Component> comps;
  for (std::size_t i = 0; i < r.hles.size(); ++i) {
    const Component c = r.hles[i].feature.component;
    auto it = std::find(comps.begin(), comps.end(), c);
    if (it == comps.end()) it = comps.insert(comps.end(), c);
    in.push_back({r.hles[i].window, r.hle_names[i], int(it - comps.begin())});
  }
  auto link = [&](int x, int y) {
    Component a = comps[std::size_t(x)], b = comps[std::size_t(y)];
    if (a.kind > b.kind) std::swap(a, b);
    auto an = [&](Code c) { return log.activity_name(c); };
    auto rn = [&](Code c) { return log.resource_name(c); };
    using K = ComponentKind;
    if (a.kind == K::activity && b.kind == K::activity) return ol.act_act(an(a.first), an(b.first));
    if (a.kind == K::resource && b.kind == K::resource) return ol.res_res(rn(a.first), rn(b.first));
    if (a.kind == K::activity && b.kind == K::resource) return ol.act_res(an(a.first), rn(b.first));
    if (a.kind == K::activity) return ol.act_seg(an(a.first), an(b.first), an(b.second));
    if (a.kind == K::resource) return ol.res_seg(rn(a.first), an(b.first), an(b.second));
    return ol.seg_seg({an(a.first), an(a.second)}, {an(b.first), an(b.second)});
  };
  const auto want = oracle::cascade_ids(in, link, 0.0);
  EXPECT_EQ(r.cascades.ids, want);
  EXPECT_EQ(r.cascades.count, *std::max_element(want.begin(), want.end()));
}

TEST(Pipeline, EntriesMirrorEvents) {
  TempDir dir;
  write_file(dir / "t.csv", kLogTCsv);
  RunConfig config = log_t_config(dir / "t.csv");
  config.percentile = 0.6;
  config.lambda = 0.5;
  const EventLog log = ingest_csv(config.input);
  const AnalysisResult r = analyze(log, config);
  ASSERT_EQ(r.entries.size(), r.hles.size());
  std::multiset<std::tuple<std::string, std::uint32_t, std::int64_t>> want, got;
  for (std::size_t i = 0; i < r.hles.size(); ++i) {
    want.insert({feature_name(log, r.hles[i].feature), r.cascades.ids[i], to_millis(r.framing.start_of(r.hles[i].window))});
  }
  for (const auto& e : r.entries) got.insert({e.activity, e.case_id, to_millis(e.timestamp)});
  EXPECT_EQ(got, want);
}

TEST(Pipeline, EmptyLog) {
  TempDir dir;
  write_file(dir / "empty.csv", "case,activity,timestamp,resource\n");
  RunConfig config;
  config.input = dir / "empty.csv";
  try {
    run_analyze(config, dir / "out");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no events"), std::string::npos);
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "out" / "hlel.csv"));
}

TEST(Pipeline, Validation) {
  RunConfig c;
  c.percentile = 1.2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.lambda = -0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.window_width = Duration(0);
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(RunConfig::from_json_text(R"({"window_width": "soon"})"), ConfigError);
  EXPECT_THROW(RunConfig::from_json_text(R"({"views": "exec,nope"})"), ConfigError);
}

TEST(Pipeline, DeterministicAndReproducibleFromEchoedConfig) {
  TempDir dir;
  ScenarioConfig sc = ScenarioConfig::defaults();
  sc.weeks.resize(2);
  std::ostringstream csv;
  write_event_log_csv(csv, generate(sc));
  write_file(dir / "log.csv", csv.str());
  RunConfig config;
  config.input = dir / "log.csv";
  config.window_width = hours(1);
  config.percentile = 0.9;
  run_analyze(config, dir / "a");
  config.threads = 1;
  run_analyze(config, dir / "b");
  for (const char* f : {"hlel.csv", "links.csv", "summary.csv", "dfg.dot"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
    EXPECT_FALSE(read_file(dir / "a" / f).empty()) << f;
  }
  const RunConfig echoed = RunConfig::load(dir / "a" / "config.json");
  run_analyze(echoed, dir / "c");
  for (const char* f : {"hlel.csv", "links.csv", "summary.csv", "dfg.dot", "config.json"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "c" / f)) << f;
  }
}

TEST(Pipeline, LinksCsv) {
  const EventLog log = oracle::log_t();
  const LogIndex index(log);
  const LinkTable t = LinkTable::build(index);
  const std::string nz = render_links_csv(log, t, false);
  const std::string all = render_links_csv(log, t, true);
  EXPECT_EQ(nz.substr(0, nz.find('\n')), "kind1,component1,kind2,component2,link");
  EXPECT_NE(nz.find("activity,a,activity,b,1\n"), std::string::npos) << nz;
  EXPECT_EQ(nz.find("activity,a,activity,c,"), std::string::npos);
  EXPECT_NE(all.find("activity,a,activity,c,0\n"), std::string::npos) << all;
  // 7 components -> 21 unordered pairs
  EXPECT_EQ(std::count(all.begin(), all.end(), '\n'), 22);
}

TEST(Pipeline, MatrixDump) {
  TempDir dir;
  write_file(dir / "t.csv", kLogTCsv);
  RunConfig config = log_t_config(dir / "t.csv");
  config.dump_matrix = true;
  run_analyze(config, dir / "out");
  const std::string m = read_file(dir / "out" / "matrix.csv");
  EXPECT_EQ(m.substr(0, m.find('\n')), "view,component,window,value");
  EXPECT_NE(m.find("delay,\"(a,b)\",0,12.5\n"), std::string::npos) << m;
}

TEST(Cli, ExitCodesAndOutputs) {
  TempDir dir;
  write_file(dir / "t.csv", kLogTCsv);
  const auto log_to = dir / "cli.txt";
  const std::string input = (dir / "t.csv").string();

  EXPECT_EQ(run_cli("analyze -i " + input + " --window-width 20s --origin 1970-01-01T00:00:00 -p 0 --lambda 0 --out " +
                        (dir / "out").string(),
                    log_to),
            0)
      << read_file(log_to);
  for (const char* f : {"hlel.csv", "links.csv", "summary.csv", "dfg.dot", "config.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
  EXPECT_NE(read_file(log_to).find("windows: 3"), std::string::npos) << read_file(log_to);

  EXPECT_EQ(run_cli("analyze -i " + (dir / "nope.csv").string() + " --out " + (dir / "missing").string(), log_to), 1);
  EXPECT_FALSE(std::filesystem::exists(dir / "missing" / "hlel.csv"));

  EXPECT_EQ(run_cli("analyze -i " + input + " -p 1.5 --out " + (dir / "bad").string(), log_to), 2);
  EXPECT_FALSE(std::filesystem::exists(dir / "bad"));
  EXPECT_EQ(run_cli("analyze -i " + input + " --window-width 0s --out " + (dir / "bad").string(), log_to), 2);
  EXPECT_EQ(run_cli("analyze -i " + input + " --bogus --out " + (dir / "bad").string(), log_to), 2);
  EXPECT_EQ(run_cli("analyze -i " + input + " --resource-col who --out " + (dir / "bad").string(), log_to), 2);
  EXPECT_EQ(run_cli("", log_to), 2);

  write_file(dir / "empty.csv", "case,activity,timestamp,resource\n");
  EXPECT_EQ(run_cli("analyze -i " + (dir / "empty.csv").string() + " --out " + (dir / "e").string(), log_to), 1);
  EXPECT_NE(read_file(log_to).find("no events"), std::string::npos);
}

TEST(Cli, Subcommands) {
  TempDir dir;
  const auto log_to = dir / "cli.txt";
  write_file(dir / "scenario.json", R"({"weeks": [[10, 15], null]})");
  ASSERT_EQ(run_cli("generate --config " + (dir / "scenario.json").string() + " --seed 3 --out " +
                        (dir / "gen.csv").string(),
                    log_to),
            0)
      << read_file(log_to);
  ASSERT_EQ(run_cli("generate --config " + (dir / "scenario.json").string() + " --seed 3 --out " +
                        (dir / "gen2.csv").string(),
                    log_to),
            0);
  EXPECT_EQ(read_file(dir / "gen.csv"), read_file(dir / "gen2.csv"));
  const std::string in = (dir / "gen.csv").string();

  ASSERT_EQ(run_cli("links -i " + in + " --out " + (dir / "links.csv").string(), log_to), 0) << read_file(log_to);
  EXPECT_EQ(read_file(dir / "links.csv").rfind("kind1,component1,kind2,component2,link\n", 0), 0u);

  ASSERT_EQ(run_cli("summary -i " + in + " --window-width 1h -p 0.9 --out " + (dir / "summary.csv").string(), log_to), 0);
  EXPECT_EQ(read_file(dir / "summary.csv").rfind("period,start,events,hles", 0), 0u);

  ASSERT_EQ(run_cli("analyze -i " + in + " --window-width 1h -p 0.9 --out " + (dir / "out").string(), log_to), 0);
  ASSERT_EQ(run_cli("dfg --hlel " + (dir / "out" / "hlel.csv").string() + " --out " + (dir / "re.dot").string(), log_to), 0)
      << read_file(log_to);
  EXPECT_EQ(read_file(dir / "re.dot"), read_file(dir / "out" / "dfg.dot"));
  ASSERT_EQ(run_cli("dfg -i " + in + " --window-width 1h -p 0.9 --out " + (dir / "direct.dot").string(), log_to), 0);
  EXPECT_EQ(read_file(dir / "direct.dot"), read_file(dir / "out" / "dfg.dot"));

  ASSERT_EQ(run_cli("analyze -i " + in + " --window-width 1h -p 0.9 --kernels scalar --threads 1 --out " +
                        (dir / "scalar").string(),
                    log_to),
            0);
  EXPECT_EQ(read_file(dir / "scalar" / "hlel.csv"), read_file(dir / "out" / "hlel.csv"));

  ASSERT_EQ(run_cli("analyze --config " + (dir / "out" / "config.json").string() + " --out " + (dir / "again").string(),
                    log_to),
            0);
  EXPECT_EQ(read_file(dir / "again" / "hlel.csv"), read_file(dir / "out" / "hlel.csv"));

  ASSERT_EQ(run_cli("analyze -i " + in + " --window-width 1h --views wl,exec --component Jane --component follow --out " +
                        (dir / "sel").string(),
                    log_to),
            0);
  const std::string sel = read_file(dir / "sel" / "hlel.csv");
  std::istringstream lines(sel);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    EXPECT_TRUE(line.find(",wl-Jane,") != std::string::npos || line.find(",exec-follow,") != std::string::npos) << line;
  }
}
