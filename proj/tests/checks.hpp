#pragma once

// Library-versus-oracle comparisons shared by the unit tests and the
// acceptance runner. Each returns an empty string on agreement, otherwise a
// description of the first mismatch.

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hle/event_log.hpp"
#include "hle/features.hpp"
#include "hle/framing.hpp"
#include "hle/linkage.hpp"
#include "oracle.hpp"

namespace checks {

inline std::string steps_agree(const std::vector<hle::EventRecord>& records) {
  const hle::EventLog log = hle::EventLog::from_records(records);
  std::set<oracle::IdPair> got;
  for (const hle::Step& s : hle::compute_steps(log)) got.insert({log[s.first].id, log[s.second].id});
  const auto want = oracle::Log(records).steps();
  if (got == want) return {};
  std::ostringstream msg;
  msg << "steps differ: library " << got.size() << ", oracle " << want.size();
  return msg.str();
}

inline bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

struct FeatureCheck {
  std::string mismatch;
  std::size_t cells = 0;
};

// Every view, component and window of the log against direct evaluation,
// plus the conservation sums.
inline FeatureCheck features_agree(const std::vector<hle::EventRecord>& records, const hle::Framing& framing,
                                   double delay_rel = 1e-9) {
  using namespace hle;
  FeatureCheck out;
  const EventLog log = EventLog::from_records(records);
  const LogIndex index(log);
  const FeatureEvaluator eval(index, framing);
  const oracle::Log olog(records);
  const oracle::Features of(olog);
  const WindowSet ws = window_set(framing, log);
  auto fail = [&](const std::string& what, WindowIndex w, double got, double want) {
    if (!out.mismatch.empty()) return;
    std::ostringstream msg;
    msg << what << " @ w" << w << ": library " << got << ", oracle " << want;
    out.mismatch = msg.str();
  };
  const std::int64_t origin = to_millis(framing.origin());
  const std::int64_t width = framing.width().count();

  for (WindowIndex w = ws.first; w <= ws.last; ++w) {
    const oracle::Win win{origin + w * width, origin + (w + 1) * width};
    for (Code a : index.components().activities) {
      const std::string& n = log.activity_name(a);
      const auto got = eval.exec(a, w), want = of.exec(n, win);
      if (got != want) fail("exec-" + n, w, double(got), double(want));
      ++out.cells;
    }
    for (Code r : index.components().resources) {
      const std::string& n = log.resource_name(r);
      auto cmp = [&](const char* v, std::int64_t got, std::int64_t want) {
        if (got != want) fail(std::string(v) + "-" + n, w, double(got), double(want));
        ++out.cells;
      };
      cmp("do", eval.done(r, w), of.done(n, win));
      cmp("todo", eval.todo(r, w), of.todo(n, win));
      cmp("wl", eval.workload(r, w), of.wl(n, win));
    }
    for (Segment s : index.components().segments) {
      const std::string& x = log.activity_name(s.from);
      const std::string& y = log.activity_name(s.to);
      const std::string n = "(" + x + "," + y + ")";
      auto cmp = [&](const char* v, std::int64_t got, std::int64_t want) {
        if (got != want) fail(std::string(v) + "-" + n, w, double(got), double(want));
        ++out.cells;
      };
      cmp("enter", eval.enter(s, w), of.enter(x, y, win));
      cmp("exit", eval.exit(s, w), of.exit(x, y, win));
      cmp("progr", eval.progress(s, w), of.progr(x, y, win));
      const auto got = eval.delay(s, w);
      const auto want = of.delay(x, y, win);
      ++out.cells;
      if (got.has_value() != want.has_value()) {
        fail("delay-" + n + " definedness", w, got.has_value(), want.has_value());
      } else if (got && !close(*got, *want, delay_rel)) {
        fail("delay-" + n, w, *got, *want);
      }
    }
  }

  // Conservation over the whole window range.
  for (Code a : index.components().activities) {
    std::int64_t sum = 0;
    for (WindowIndex w = ws.first; w <= ws.last; ++w) sum += eval.exec(a, w);
    if (sum != static_cast<std::int64_t>(index.activity_events(a).size())) {
      fail("sum exec-" + log.activity_name(a), ws.last, double(sum), double(index.activity_events(a).size()));
    }
  }
  for (Code r : index.components().resources) {
    std::int64_t sum = 0;
    for (WindowIndex w = ws.first; w <= ws.last; ++w) sum += eval.done(r, w);
    if (sum != static_cast<std::int64_t>(index.resource_events(r).size())) {
      fail("sum do-" + log.resource_name(r), ws.last, double(sum), double(index.resource_events(r).size()));
    }
  }
  for (Segment s : index.components().segments) {
    std::int64_t in = 0, outs = 0;
    for (WindowIndex w = ws.first; w <= ws.last; ++w) {
      in += eval.enter(s, w);
      outs += eval.exit(s, w);
    }
    const auto n = static_cast<std::int64_t>(index.segment_steps(s).size());
    if (in != n || outs != n) fail("sum enter/exit " + component_name(log, Component::segment(s)), ws.last, double(in), double(n));
  }
  return out;
}

// Every component pair: bounds, symmetry, per-pair function, aggregated
// table and the oracle all agree.
inline std::string links_agree(const std::vector<hle::EventRecord>& records, double tol = 1e-12) {
  using namespace hle;
  const EventLog log = EventLog::from_records(records);
  const LogIndex index(log);
  const LinkTable table = LinkTable::build(index);
  const oracle::Log olog(records);
  const oracle::Links ol(olog);
  const auto comps = index.all_components();

  auto want = [&](Component x, Component y) -> double {
    if (x == y) return 1.0;
    auto act = [&](Component c) { return log.activity_name(c.first); };
    auto res = [&](Component c) { return log.resource_name(c.first); };
    auto seg = [&](Component c) {
      return std::pair<std::string, std::string>{log.activity_name(c.first), log.activity_name(c.second)};
    };
    if (x.kind > y.kind) std::swap(x, y);
    using K = ComponentKind;
    if (x.kind == K::activity && y.kind == K::activity) return ol.act_act(act(x), act(y));
    if (x.kind == K::resource && y.kind == K::resource) return ol.res_res(res(x), res(y));
    if (x.kind == K::activity && y.kind == K::resource) return ol.act_res(act(x), res(y));
    if (x.kind == K::activity && y.kind == K::segment) return ol.act_seg(act(x), seg(y).first, seg(y).second);
    if (x.kind == K::resource && y.kind == K::segment) return ol.res_seg(res(x), seg(y).first, seg(y).second);
    return ol.seg_seg(seg(x), seg(y));
  };

  for (const Component& x : comps) {
    for (const Component& y : comps) {
      const double t = table(x, y);
      const double d = link(index, x, y);
      const double o = want(x, y);
      const std::string pair = component_name(log, x) + " ~ " + component_name(log, y);
      if (!(t >= 0.0 && t <= 1.0)) return "out of [0,1]: " + pair;
      if (t != table(y, x)) return "asymmetric: " + pair;
      if (std::abs(t - o) > tol || std::abs(d - o) > tol) {
        std::ostringstream msg;
        msg << pair << ": table " << t << ", direct " << d << ", oracle " << o;
        return msg.str();
      }
    }
  }
  return {};
}

// Random high-level events over a random component universe and link table.
struct CascadeCase {
  std::vector<hle::HighLevelEvent> hles;
  std::vector<std::string> names;
  hle::LinkTable links;
  std::vector<hle::Component> universe;
};

inline CascadeCase random_cascade_case(std::mt19937_64& rng, std::size_t max_hles = 200) {
  using namespace hle;
  CascadeCase c;
  for (Code a = 0; a < 4; ++a) c.universe.push_back(Component::activity(a));
  for (Code r = 0; r < 3; ++r) c.universe.push_back(Component::resource(r));
  for (Code a = 0; a < 3; ++a) c.universe.push_back(Component::segment({a, Code(a + 1)}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < c.universe.size(); ++i) {
    for (std::size_t j = i + 1; j < c.universe.size(); ++j) {
      const double p = u(rng);
      if (p < 0.4) continue;
      // a few exact values so ties with lambda get exercised
      const double v = p < 0.5 ? 0.5 : u(rng);
      c.links.set(c.universe[i], c.universe[j], v);
    }
  }
  std::uniform_int_distribution<std::size_t> n(0, max_hles);
  std::uniform_int_distribution<std::size_t> pick(0, c.universe.size() - 1);
  std::uniform_int_distribution<WindowIndex> win(0, 12);
  const std::size_t count = n(rng);
  std::set<std::pair<WindowIndex, FeatureId>> seen;
  for (std::size_t i = 0; i < count; ++i) {
    const Component comp = c.universe[pick(rng)];
    std::vector<View> views;
    for (View v : kAllViews) {
      if (view_kind(v) == comp.kind) views.push_back(v);
    }
    const View v = views[std::uniform_int_distribution<std::size_t>(0, views.size() - 1)(rng)];
    const FeatureId f{v, comp};
    const WindowIndex w = win(rng);
    if (!seen.insert({w, f}).second) continue;
    c.hles.push_back({f, w, u(rng)});
    std::string comp_name;
    if (comp.kind == ComponentKind::activity) comp_name = std::string(1, char('a' + comp.first));
    if (comp.kind == ComponentKind::resource) comp_name = "r" + std::to_string(comp.first);
    if (comp.kind == ComponentKind::segment) {
      comp_name = std::string("(") + char('a' + comp.first) + "," + char('a' + comp.second) + ")";
    }
    c.names.push_back(std::string(view_name(v)) + "-" + comp_name);
  }
  return c;
}

inline std::vector<std::uint32_t> oracle_cascades(const CascadeCase& c, double lambda) {
  std::vector<oracle::CascadeInput> in;
  auto key = [&](const hle::Component& x) {
    for (std::size_t i = 0; i < c.universe.size(); ++i) {
      if (c.universe[i] == x) return static_cast<int>(i);
    }
    return -1;
  };
  for (std::size_t i = 0; i < c.hles.size(); ++i) in.push_back({c.hles[i].window, c.names[i], key(c.hles[i].feature.component)});
  auto link = [&](int x, int y) { return c.links(c.universe[std::size_t(x)], c.universe[std::size_t(y)]); };
  return oracle::cascade_ids(in, link, lambda);
}

// Every cascade at the larger lambda nests inside one at the smaller.
inline bool refines(const std::vector<std::uint32_t>& fine, const std::vector<std::uint32_t>& coarse) {
  std::map<std::uint32_t, std::uint32_t> parent;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    auto [it, fresh] = parent.emplace(fine[i], coarse[i]);
    if (!fresh && it->second != coarse[i]) return false;
  }
  return true;
}

}  // namespace checks
