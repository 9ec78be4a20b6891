#include "hle/linkage.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace hle {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t count_steps(const LogIndex& index, Code a1, Code a2) {
  return index.segment_steps({a1, a2}).size();
}

// Triples (e1,e2,e3) with (e1,e2) an s-step and (e2,e3) an s'-step, where
// s' continues s.
std::size_t chained_triples(const LogIndex& index, Segment s, Segment next) {
  if (s.to != next.from) return 0;
  const EventLog& log = index.log();
  std::size_t n = 0;
  for (const Step& st : index.segment_steps(s)) {
    const EventIndex e3 = index.successor_of(st.second);
    if (e3 != kNoEvent && log[e3].activity == next.to) ++n;
  }
  return n;
}

}  // namespace

double link_activity_pair(const LogIndex& index, Code a1, Code a2) {
  const auto n1 = index.activity_events(a1).size();
  const auto n2 = index.activity_events(a2).size();
  return std::max(ratio(count_steps(index, a1, a2), n1), ratio(count_steps(index, a2, a1), n2));
}

double link_resource_pair(const LogIndex& index, Code r1, Code r2) {
  const EventLog& log = index.log();
  auto handovers = [&](Code from, Code to) {
    std::size_t n = 0;
    for (EventIndex i : index.resource_events(from)) {
      const EventIndex next = index.successor_of(i);
      if (next != kNoEvent && log[next].resource == to) ++n;
    }
    return n;
  };
  return std::max(ratio(handovers(r1, r2), index.resource_events(r1).size()),
                  ratio(handovers(r2, r1), index.resource_events(r2).size()));
}

double link_activity_resource(const LogIndex& index, Code a, Code r) {
  const EventLog& log = index.log();
  const auto a_events = index.activity_events(a);
  const auto both = static_cast<std::size_t>(
      std::count_if(a_events.begin(), a_events.end(), [&](EventIndex i) { return log[i].resource == r; }));
  return std::max(ratio(both, a_events.size()), ratio(both, index.resource_events(r).size()));
}

double link_activity_segment(const LogIndex& index, Code a, Segment s) {
  if (a != s.from && a != s.to) return 0.0;
  const auto most = std::max(count_steps(index, s.from, s.to), count_steps(index, s.to, s.from));
  return ratio(most, index.activity_events(a).size());
}

double link_resource_segment(const LogIndex& index, Code r, Segment s) {
  const EventLog& log = index.log();
  const auto steps = index.segment_steps(s);
  const auto touching = static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [&](const Step& st) {
    return log[st.first].resource == r || log[st.second].resource == r;
  }));
  return std::max(ratio(touching, index.resource_events(r).size()), ratio(touching, steps.size()));
}

double link_segment_pair(const LogIndex& index, Segment s1, Segment s2) {
  const auto n1 = index.segment_steps(s1).size();
  const auto n2 = index.segment_steps(s2).size();
  const auto forward = chained_triples(index, s1, s2);
  const auto backward = chained_triples(index, s2, s1);
  return std::max({ratio(forward, n1), ratio(forward, n2), ratio(backward, n1), ratio(backward, n2)});
}

double link(const LogIndex& index, Component x1, Component x2) {
  if (x1 == x2) return 1.0;
  if (x2.kind < x1.kind) std::swap(x1, x2);
  using K = ComponentKind;
  switch (x1.kind) {
    case K::activity:
      if (x2.kind == K::activity) return link_activity_pair(index, x1.first, x2.first);
      if (x2.kind == K::resource) return link_activity_resource(index, x1.first, x2.first);
      return link_activity_segment(index, x1.first, x2.as_segment());
    case K::resource:
      if (x2.kind == K::resource) return link_resource_pair(index, x1.first, x2.first);
      return link_resource_segment(index, x1.first, x2.as_segment());
    case K::segment:
      return link_segment_pair(index, x1.as_segment(), x2.as_segment());
  }
  return 0.0;
}

LinkTable LinkTable::build(const LogIndex& index) {
  const EventLog& log = index.log();
  const auto& sets = index.components();
  LinkTable table;
  table.components_ = index.all_components();

  std::vector<std::size_t> per_activity(log.activities().size()), per_resource(log.resources().size());
  std::map<std::pair<Code, Code>, std::size_t> coexec;
  for (const Event& e : log.events()) {
    ++per_activity[e.activity];
    ++per_resource[e.resource];
    ++coexec[{e.activity, e.resource}];
  }

  std::map<Segment, std::size_t> per_segment;
  std::map<std::pair<Code, Code>, std::size_t> handover;
  std::map<std::pair<Segment, Code>, std::size_t> seg_res;
  std::map<std::tuple<Code, Code, Code>, std::size_t> triples;
  for (const Step& st : index.steps()) {
    const Event& e1 = log[st.first];
    const Event& e2 = log[st.second];
    const Segment seg{e1.activity, e2.activity};
    ++per_segment[seg];
    ++handover[{e1.resource, e2.resource}];
    ++seg_res[{seg, e1.resource}];
    if (e2.resource != e1.resource) ++seg_res[{seg, e2.resource}];
    const EventIndex e3 = index.successor_of(st.second);
    if (e3 != kNoEvent) ++triples[{e1.activity, e2.activity, log[e3].activity}];
  }
  auto segment_count = [&](Code a1, Code a2) {
    const auto it = per_segment.find({a1, a2});
    return it == per_segment.end() ? std::size_t{0} : it->second;
  };

  auto put = [&](Component x1, Component x2, double value) {
    if (value > 0.0) table.set(x1, x2, std::max(value, table(x1, x2)));
  };

  for (const auto& [seg, n] : per_segment) {
    if (seg.from == seg.to) continue;
    put(Component::activity(seg.from), Component::activity(seg.to),
        std::max(ratio(n, per_activity[seg.from]), ratio(segment_count(seg.to, seg.from), per_activity[seg.to])));
  }
  for (const auto& [pair, n] : handover) {
    const auto [r1, r2] = pair;
    if (r1 == r2) continue;
    const auto back = handover.find({r2, r1});
    const std::size_t m = back == handover.end() ? 0 : back->second;
    put(Component::resource(r1), Component::resource(r2),
        std::max(ratio(n, per_resource[r1]), ratio(m, per_resource[r2])));
  }
  for (const auto& [pair, n] : coexec) {
    const auto [a, r] = pair;
    put(Component::activity(a), Component::resource(r),
        std::max(ratio(n, per_activity[a]), ratio(n, per_resource[r])));
  }
  for (const Segment& seg : sets.segments) {
    const auto most = std::max(segment_count(seg.from, seg.to), segment_count(seg.to, seg.from));
    put(Component::activity(seg.from), Component::segment(seg), ratio(most, per_activity[seg.from]));
    put(Component::activity(seg.to), Component::segment(seg), ratio(most, per_activity[seg.to]));
  }
  for (const auto& [pair, n] : seg_res) {
    const auto& [seg, r] = pair;
    put(Component::resource(r), Component::segment(seg),
        std::max(ratio(n, per_resource[r]), ratio(n, per_segment[seg])));
  }
  for (const auto& [triple, n] : triples) {
    const auto [a1, a2, a3] = triple;
    const Segment s1{a1, a2};
    const Segment s2{a2, a3};
    if (s1 == s2) continue;
    put(Component::segment(s1), Component::segment(s2),
        std::max(ratio(n, per_segment[s1]), ratio(n, per_segment[s2])));
  }
  return table;
}

double LinkTable::operator()(Component x1, Component x2) const {
  if (x1 == x2) return 1.0;
  if (x2 < x1) std::swap(x1, x2);
  const auto it = links_.find({x1, x2});
  return it == links_.end() ? 0.0 : it->second;
}

void LinkTable::set(Component x1, Component x2, double value) {
  if (x2 < x1) std::swap(x1, x2);
  if (value == 0.0) {
    links_.erase({x1, x2});
  } else {
    links_[{x1, x2}] = value;
  }
}

double proximity(const HighLevelEvent& hle1, const HighLevelEvent& hle2, const LinkTable& links) {
  if (hle2.window != hle1.window + 1) return 0.0;
  if (hle1.feature.component == hle2.feature.component) return 1.0;
  return links(hle1.feature.component, hle2.feature.component);
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

CascadeAssignment cascades(std::span<const HighLevelEvent> hles, std::span<const std::string> names,
                           const LinkTable& links, double lambda) {
  const std::size_t n = hles.size();
  std::map<WindowIndex, std::vector<std::size_t>> by_window;
  for (std::size_t i = 0; i < n; ++i) by_window[hles[i].window].push_back(i);

  UnionFind uf(n);
  for (const auto& [w, members] : by_window) {
    const auto next = by_window.find(w + 1);
    if (next == by_window.end()) continue;
    for (std::size_t i : members) {
      for (std::size_t j : next->second) {
        if (proximity(hles[i], hles[j], links) >= lambda) uf.unite(i, j);
      }
    }
  }

  // Smallest (window, name) over the members of each cascade.
  std::map<std::size_t, std::size_t> first_member;
  auto earlier = [&](std::size_t a, std::size_t b) {
    if (hles[a].window != hles[b].window) return hles[a].window < hles[b].window;
    return names[a] < names[b];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    auto [it, inserted] = first_member.try_emplace(root, i);
    if (!inserted && earlier(i, it->second)) it->second = i;
  }
  std::vector<std::pair<std::size_t, std::size_t>> order(first_member.begin(), first_member.end());
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) { return earlier(a.second, b.second); });

  std::map<std::size_t, std::uint32_t> id_of_root;
  for (std::size_t k = 0; k < order.size(); ++k) id_of_root[order[k].first] = static_cast<std::uint32_t>(k + 1);

  CascadeAssignment out;
  out.count = static_cast<std::uint32_t>(order.size());
  out.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.ids[i] = id_of_root[uf.find(i)];
  return out;
}

CascadeAssignment cascades(std::span<const HighLevelEvent> hles, const EventLog& log, const LinkTable& links,
                           double lambda) {
  std::vector<std::string> names;
  names.reserve(hles.size());
  for (const auto& h : hles) names.push_back(feature_name(log, h.feature));
  return cascades(hles, names, links, lambda);
}

}  // namespace hle
