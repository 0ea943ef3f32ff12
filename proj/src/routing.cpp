#include "gscsat/routing.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace gscsat {

namespace {

constexpr double kCapacityEpsilon = 1e-9;

std::int64_t to_ns(double ms) { return std::llround(ms * 1e6); }

using Cost = std::pair<std::int64_t, std::int64_t>;

constexpr Cost kInfinite{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max()};

Cost add(Cost a, Cost b) { return {a.first + b.first, a.second + b.second}; }

Cost edge_cost(const ExpandedGraph::Edge& e, Objective objective) {
  return objective == Objective::DelayFirst ? Cost{e.delayNs, e.bandwidthUnits}
                                            : Cost{e.bandwidthUnits, e.delayNs};
}

struct StageLayout {
  std::vector<Stage> active;
  Stage start;
  Stage accept;
};

StageLayout layout_for(AppCase c, bool traditional) {
  if (traditional) return {{Stage::RawPre}, Stage::RawPre, Stage::RawPre};
  switch (c) {
    case AppCase::TerminalsBoth:
      return {{Stage::Compressed}, Stage::Compressed, Stage::Compressed};
    case AppCase::SenderEncodes:
      return {{Stage::Compressed, Stage::RawPost}, Stage::Compressed, Stage::RawPost};
    case AppCase::ReceiverDecodes:
      return {{Stage::RawPre, Stage::Compressed}, Stage::RawPre, Stage::Compressed};
    case AppCase::SatellitesBoth:
      return {{Stage::RawPre, Stage::Compressed, Stage::RawPost}, Stage::RawPre, Stage::RawPost};
  }
  throw ValidationError("unknown application case");
}

/// Nodes that may carry the application's traffic: satellites plus its own terminals.
std::vector<char> allowed_nodes(const SnapshotGraph& g, int srcIdx, int dstIdx) {
  std::vector<char> allowed(g.nodes().size(), 0);
  for (std::size_t i = 0; i < g.nodes().size(); ++i) allowed[i] = g.nodes()[i].is_satellite();
  allowed[srcIdx] = 1;
  allowed[dstIdx] = 1;
  return allowed;
}

bool physically_connected(const SnapshotGraph& g, int srcIdx, int dstIdx) {
  const auto allowed = allowed_nodes(g, srcIdx, dstIdx);
  std::vector<char> seen(g.nodes().size(), 0);
  std::vector<int> stack{srcIdx};
  seen[srcIdx] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == dstIdx) return true;
    for (const auto& adj : g.adjacent(v)) {
      if (allowed[adj.neighbor] && !seen[adj.neighbor]) {
        seen[adj.neighbor] = 1;
        stack.push_back(adj.neighbor);
      }
    }
  }
  return false;
}

RoutePlan to_plan(const StatePath& sp, const ExpandedGraph& g, const Application& app,
                  const CompressionProfile* profile) {
  const SnapshotGraph& snap = *g.snapshot;
  RoutePlan plan;
  plan.appId = app.id;
  plan.caseType = app.caseType;
  plan.kb = app.kb;
  plan.path.push_back(snap.nodes()[ExpandedGraph::node_of(sp.states.front())].id);
  for (std::size_t i = 0; i < sp.edgeIndex.size(); ++i) {
    const auto& e = g.edges[sp.edgeIndex[i]];
    const int from = sp.states[i];
    const NodeId here = snap.nodes()[ExpandedGraph::node_of(from)].id;
    switch (e.kind) {
      case ExpandedGraph::EdgeKind::Link: {
        const Stage s = ExpandedGraph::stage_of(from);
        plan.path.push_back(snap.nodes()[ExpandedGraph::node_of(e.to)].id);
        plan.stageLabels.push_back(s);
        plan.perLinkRateMbps.push_back(g.stageRateMbps[static_cast<int>(s)]);
        plan.linkDelayMs.push_back(snap.links()[e.link].propagationDelayMs);
        break;
      }
      case ExpandedGraph::EdgeKind::Encode:
        plan.encoderNode = here;
        break;
      case ExpandedGraph::EdgeKind::Decode:
        plan.decoderNode = here;
        break;
    }
  }
  plan.occupiedBandwidthMbps = occupied_bandwidth(plan);
  plan.endToEndDelayMs = profile ? end_to_end_delay(plan, *profile)
                                 : end_to_end_delay(plan, CompressionProfile{});
  return plan;
}

RouteResult route_impl(const Application& app, const SnapshotGraph& snapshot,
                       const CompressionProfile& profile, const RoutingOptions& opts,
                       bool traditional) {
  ExpansionOptions eo;
  eo.traditional = traditional;
  const ExpandedGraph g = expand_stage_graph(snapshot, app, profile, eo);
  try {
    if (auto sp = shortest_delay_path(g, g.sourceState, g.acceptStates, opts)) {
      return to_plan(*sp, g, app, traditional ? nullptr : &profile);
    }
  } catch (const SearchLimitExceeded&) {
    return Unroutable{UnroutableReason::SearchLimit};
  }

  const int srcIdx = snapshot.index_of(app.src);
  const int dstIdx = snapshot.index_of(app.dst);
  if (!physically_connected(snapshot, srcIdx, dstIdx)) return Unroutable{UnroutableReason::Disconnected};
  if (traditional || app.caseType == AppCase::TerminalsBoth) {
    return Unroutable{UnroutableReason::InsufficientCapacity};
  }
  eo.ignoreCapacity = true;
  const ExpandedGraph relaxed = expand_stage_graph(snapshot, app, profile, eo);
  try {
    if (!shortest_delay_path(relaxed, relaxed.sourceState, relaxed.acceptStates, opts)) {
      return Unroutable{UnroutableReason::NoMatchingKB};
    }
  } catch (const SearchLimitExceeded&) {
    return Unroutable{UnroutableReason::SearchLimit};
  }
  return Unroutable{UnroutableReason::InsufficientCapacity};
}

}  // namespace

AppCase app_case_from_int(int value) {
  if (value < 1 || value > 4) throw ValidationError("case type must be 1..4, got " + std::to_string(value));
  return static_cast<AppCase>(value);
}

void validate_application(const Application& app, int kbCount) {
  const std::string who = "application " + std::to_string(app.id);
  if (app.src == app.dst) throw ValidationError(who + ": source equals destination");
  if (!(app.rateMbps > 0.0)) throw ValidationError(who + ": rate must be positive");
  if (app.kb < 0 || app.kb >= kbCount) throw ValidationError(who + ": unknown knowledge base");
  if (app.ratio.num <= 0 || app.ratio.den <= 0 || app.ratio.num > app.ratio.den) {
    throw ValidationError(who + ": compression ratio must lie in (0, 1]");
  }
  app_case_from_int(static_cast<int>(app.caseType));
}

CompressionProfile CompressionProfile::uniform(int kbCount, Ratio r, double encodeMs, double decodeMs) {
  CompressionProfile p;
  p.ratio.assign(kbCount, r);
  p.encodeLatencyMs.assign(kbCount, encodeMs);
  p.decodeLatencyMs.assign(kbCount, decodeMs);
  return p;
}

double CompressionProfile::encode_latency(KbId kb) const {
  return kb >= 0 && kb < static_cast<KbId>(encodeLatencyMs.size()) ? encodeLatencyMs[kb] : 0.0;
}

double CompressionProfile::decode_latency(KbId kb) const {
  return kb >= 0 && kb < static_cast<KbId>(decodeLatencyMs.size()) ? decodeLatencyMs[kb] : 0.0;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::RawPre:
      return "raw-pre";
    case Stage::Compressed:
      return "compressed";
    case Stage::RawPost:
      return "raw-post";
  }
  return "?";
}

std::string_view to_string(UnroutableReason r) {
  switch (r) {
    case UnroutableReason::Disconnected:
      return "disconnected";
    case UnroutableReason::NoMatchingKB:
      return "noMatchingKB";
    case UnroutableReason::InsufficientCapacity:
      return "insufficientCapacity";
    case UnroutableReason::SearchLimit:
      return "searchLimit";
  }
  return "?";
}

ExpandedGraph expand_stage_graph(const SnapshotGraph& snapshot, const Application& app,
                                 const CompressionProfile& profile, ExpansionOptions opts) {
  validate_application(app, snapshot.kb_count());
  const int srcIdx = snapshot.index_of(app.src);
  const int dstIdx = snapshot.index_of(app.dst);
  if (srcIdx < 0 || dstIdx < 0) throw ValidationError("application endpoints are not in the snapshot");

  const StageLayout layout = layout_for(app.caseType, opts.traditional);
  ExpandedGraph g;
  g.snapshot = &snapshot;
  g.activeStages = layout.active;
  g.sourceState = ExpandedGraph::make_state(srcIdx, layout.start);
  g.acceptStates = {ExpandedGraph::make_state(dstIdx, layout.accept)};

  bool active[kStageCount] = {false, false, false};
  for (Stage s : layout.active) active[static_cast<int>(s)] = true;
  for (int s = 0; s < kStageCount; ++s) {
    const bool compressed = static_cast<Stage>(s) == Stage::Compressed;
    g.stageRateMbps[s] = compressed ? app.rateMbps * app.ratio.value() : app.rateMbps;
    g.stageUnits[s] = opts.traditional ? 1 : (compressed ? app.ratio.num : app.ratio.den);
  }

  const auto allowed = allowed_nodes(snapshot, srcIdx, dstIdx);
  const std::int64_t encodeNs = to_ns(profile.encode_latency(app.kb));
  const std::int64_t decodeNs = to_ns(profile.decode_latency(app.kb));
  const int nodeCount = static_cast<int>(snapshot.nodes().size());

  std::vector<std::int64_t> linkNs(snapshot.links().size());
  for (std::size_t i = 0; i < linkNs.size(); ++i) linkNs[i] = to_ns(snapshot.links()[i].propagationDelayMs);
  g.offsets.assign(static_cast<std::size_t>(nodeCount) * kStageCount + 1, 0);
  g.edges.reserve((2 * snapshot.links().size() + static_cast<std::size_t>(nodeCount)) * layout.active.size());
  for (int v = 0; v < nodeCount; ++v) {
    const NodeSpec& node = snapshot.nodes()[v];
    for (int s = 0; s < kStageCount; ++s) {
      const int state = v * kStageCount + s;
      g.offsets[state] = static_cast<int>(g.edges.size());
      if (!allowed[v] || !active[s]) continue;
      if (v != dstIdx) {
        for (const auto& adj : snapshot.adjacent(v)) {
          if (!allowed[adj.neighbor]) continue;
          const SnapshotLink& lk = snapshot.links()[adj.link];
          if (!opts.ignoreCapacity && lk.residualMbps + kCapacityEpsilon < g.stageRateMbps[s]) continue;
          g.edges.push_back({adj.neighbor * kStageCount + s, adj.link, linkNs[adj.link],
                             g.stageUnits[s], ExpandedGraph::EdgeKind::Link});
        }
      }
      if (!node.is_satellite()) continue;
      const auto stage = static_cast<Stage>(s);
      if (stage == Stage::RawPre && active[1] && node.can_encode(app.kb)) {
        g.edges.push_back({v * kStageCount + 1, -1, encodeNs, 0, ExpandedGraph::EdgeKind::Encode});
      }
      if (stage == Stage::Compressed && active[2] && node.can_decode(app.kb)) {
        g.edges.push_back({v * kStageCount + 2, -1, decodeNs, 0, ExpandedGraph::EdgeKind::Decode});
      }
    }
  }
  g.offsets.back() = static_cast<int>(g.edges.size());

  // Reverse adjacency by counting sort on the head state.
  const int states = g.state_count();
  g.reverseOffsets.assign(states + 1, 0);
  for (const auto& e : g.edges) ++g.reverseOffsets[e.to + 1];
  for (int s = 0; s < states; ++s) g.reverseOffsets[s + 1] += g.reverseOffsets[s];
  g.reverseEdges.resize(g.edges.size());
  std::vector<int> fill(g.reverseOffsets.begin(), g.reverseOffsets.end() - 1);
  for (int tail = 0; tail < states; ++tail) {
    for (int k = g.offsets[tail]; k < g.offsets[tail + 1]; ++k) {
      ExpandedGraph::Edge r = g.edges[k];
      const int head = r.to;
      r.to = tail;
      g.reverseEdges[fill[head]++] = r;
    }
  }
  return g;
}

std::optional<StatePath> shortest_delay_path(const ExpandedGraph& graph, int srcState,
                                             const std::vector<int>& dstStates,
                                             const RoutingOptions& opts) {
  const int states = graph.state_count();
  if (srcState < 0 || srcState >= states) throw ValidationError("source state out of range");
  std::vector<char> accepting(states, 0);
  for (int s : dstStates) {
    if (s < 0 || s >= states) throw ValidationError("accept state out of range");
    accepting[s] = 1;
  }
  if (accepting[srcState]) return StatePath{{srcState}, {}, 0, 0};

  // Exact cost-to-go on the relaxed problem (simple-path and encode/decode
  // separation dropped); admissible and consistent for the search below.
  // Settling stops once every state no costlier than the source is final,
  // which is all the tight-edge walk reads; it resumes only if that walk fails.
  std::vector<Cost> toGo(states, kInfinite);
  std::vector<char> settled(states, 0);
  using Item = std::pair<Cost, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : dstStates) {
    toGo[s] = {0, 0};
    pq.push({toGo[s], s});
  }
  auto settle = [&](bool stopPastSource) {
    while (!pq.empty()) {
      auto [c, v] = pq.top();
      if (c != toGo[v] || settled[v]) {
        pq.pop();
        continue;
      }
      if (stopPastSource && settled[srcState] && toGo[srcState] < c) return;
      pq.pop();
      settled[v] = 1;
      for (int k = graph.reverseOffsets[v]; k < graph.reverseOffsets[v + 1]; ++k) {
        const auto& e = graph.reverseEdges[k];
        const Cost nc = add(c, edge_cost(e, opts.objective));
        if (nc < toGo[e.to]) {
          toGo[e.to] = nc;
          pq.push({nc, e.to});
        }
      }
    }
  };
  settle(true);
  if (!settled[srcState]) return std::nullopt;

  // Lexicographically smallest relaxed optimum: follow tight edges, smallest
  // head first. When it already obeys the path rules it is the answer.
  {
    StatePath sp;
    sp.states.push_back(srcState);
    std::vector<char> used(static_cast<std::size_t>(states / kStageCount), 0);
    used[ExpandedGraph::node_of(srcState)] = 1;
    bool valid = true;
    bool lastWasLink = false;
    int cur = srcState;
    while (!accepting[cur]) {
      int best = -1;
      for (int k = graph.offsets[cur]; k < graph.offsets[cur + 1]; ++k) {
        const auto& e = graph.edges[k];
        if (!settled[e.to]) continue;
        if (add(edge_cost(e, opts.objective), toGo[e.to]) != toGo[cur]) continue;
        if (best < 0 || e.to < graph.edges[best].to) best = k;
      }
      const auto& e = graph.edges[best];
      if (e.kind == ExpandedGraph::EdgeKind::Link) {
        const int node = ExpandedGraph::node_of(e.to);
        if (used[node]) valid = false;
        used[node] = 1;
      } else if (e.kind == ExpandedGraph::EdgeKind::Decode && !lastWasLink) {
        valid = false;
      }
      if (!valid) break;
      lastWasLink = e.kind == ExpandedGraph::EdgeKind::Link;
      sp.states.push_back(e.to);
      sp.edgeIndex.push_back(best);
      sp.delayNs += e.delayNs;
      sp.bandwidthUnits += e.bandwidthUnits;
      cur = e.to;
    }
    if (valid) return sp;
  }
  settle(false);

  struct Label {
    int state;
    int parent;
    int edge;
    Cost g;
    Cost f;
  };
  std::vector<Label> labels;
  labels.push_back({srcState, -1, -1, {0, 0}, toGo[srcState]});

  std::vector<int> seqA, seqB;
  auto sequence = [&](int id, std::vector<int>& out) {
    out.clear();
    for (int l = id; l >= 0; l = labels[l].parent) out.push_back(labels[l].state);
    std::reverse(out.begin(), out.end());
  };
  // Heap order: smaller f first, then lexicographically smaller state sequence.
  auto worse = [&](int a, int b) {
    if (labels[a].f != labels[b].f) return labels[b].f < labels[a].f;
    sequence(a, seqA);
    sequence(b, seqB);
    return std::lexicographical_compare(seqB.begin(), seqB.end(), seqA.begin(), seqA.end());
  };
  std::priority_queue<int, std::vector<int>, decltype(worse)> open(worse);
  open.push(0);

  struct Expanded {
    std::vector<int> nodes;  // sorted physical node indices on the label's path
    bool viaLink;
  };
  constexpr std::size_t kDominanceSlots = 8;
  std::vector<std::vector<Expanded>> expandedAt(states);

  std::vector<int> onPath;
  while (!open.empty()) {
    const int id = open.top();
    open.pop();
    const Label cur = labels[id];

    if (accepting[cur.state]) {
      StatePath sp;
      for (int l = id; l >= 0; l = labels[l].parent) {
        sp.states.push_back(labels[l].state);
        if (labels[l].edge >= 0) sp.edgeIndex.push_back(labels[l].edge);
      }
      std::reverse(sp.states.begin(), sp.states.end());
      std::reverse(sp.edgeIndex.begin(), sp.edgeIndex.end());
      for (int k : sp.edgeIndex) {
        sp.delayNs += graph.edges[k].delayNs;
        sp.bandwidthUnits += graph.edges[k].bandwidthUnits;
      }
      return sp;
    }

    onPath.clear();
    for (int l = id; l >= 0; l = labels[l].parent) onPath.push_back(ExpandedGraph::node_of(labels[l].state));
    std::sort(onPath.begin(), onPath.end());
    onPath.erase(std::unique(onPath.begin(), onPath.end()), onPath.end());
    const bool viaLink = cur.edge >= 0 && graph.edges[cur.edge].kind == ExpandedGraph::EdgeKind::Link;

    // A label popped earlier at this state with a subset of our nodes reaches
    // every completion we can, at no greater cost and lexicographically first.
    auto& seen = expandedAt[cur.state];
    const bool dominated = std::any_of(seen.begin(), seen.end(), [&](const Expanded& m) {
      return (m.viaLink || !viaLink) &&
             std::includes(onPath.begin(), onPath.end(), m.nodes.begin(), m.nodes.end());
    });
    if (dominated) continue;
    if (seen.size() < kDominanceSlots) seen.push_back({onPath, viaLink});

    for (int k = graph.offsets[cur.state]; k < graph.offsets[cur.state + 1]; ++k) {
      const auto& e = graph.edges[k];
      if (toGo[e.to] == kInfinite) continue;
      if (e.kind == ExpandedGraph::EdgeKind::Link &&
          std::binary_search(onPath.begin(), onPath.end(), ExpandedGraph::node_of(e.to))) {
        continue;
      }
      if (e.kind == ExpandedGraph::EdgeKind::Decode && !viaLink) continue;
      const Cost g = add(cur.g, edge_cost(e, opts.objective));
      labels.push_back({e.to, id, k, g, add(g, toGo[e.to])});
      open.push(static_cast<int>(labels.size()) - 1);
    }
    if (labels.size() > opts.labelBudget) throw SearchLimitExceeded("route search exceeded its label budget");
  }
  return std::nullopt;
}

RouteResult route(const Application& app, const SnapshotGraph& snapshot,
                  const CompressionProfile& profile, const RoutingOptions& opts) {
  return route_impl(app, snapshot, profile, opts, false);
}

RouteResult route_traditional(const Application& app, const SnapshotGraph& snapshot,
                              const RoutingOptions& opts) {
  return route_impl(app, snapshot, CompressionProfile{}, opts, true);
}

double occupied_bandwidth(const RoutePlan& plan) {
  double sum = 0.0;
  for (double r : plan.perLinkRateMbps) sum += r;
  return sum;
}

double end_to_end_delay(const RoutePlan& plan, const CompressionProfile& profile) {
  double sum = 0.0;
  for (double d : plan.linkDelayMs) sum += d;
  if (plan.encoderNode) sum += profile.encode_latency(plan.kb);
  if (plan.decoderNode) sum += profile.decode_latency(plan.kb);
  return sum;
}

bool admit(const RoutePlan& plan, SnapshotGraph& snapshot) {
  std::vector<int> links;
  for (std::size_t i = 0; i + 1 < plan.path.size(); ++i) {
    const int l = snapshot.find_link(plan.path[i], plan.path[i + 1]);
    if (l < 0) throw ValidationError("plan uses a link absent from the snapshot");
    if (snapshot.links()[l].residualMbps + kCapacityEpsilon < plan.perLinkRateMbps[i]) return false;
    links.push_back(l);
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    auto& lk = snapshot.link(links[i]);
    lk.residualMbps = std::max(0.0, lk.residualMbps - plan.perLinkRateMbps[i]);
  }
  return true;
}

ReplanResult replan_routes(const Application& app, const std::vector<SnapshotGraph>& snapshots,
                           const CompressionProfile& profile, const RoutingOptions& opts) {
  ReplanResult out;
  out.perWindow.reserve(snapshots.size());  // `previous` points into this vector
  const RoutePlan* previous = nullptr;
  for (std::size_t w = 0; w < snapshots.size(); ++w) {
    const bool present = snapshots[w].find_node(app.src) && snapshots[w].find_node(app.dst);
    RouteResult r = present ? route(app, snapshots[w], profile, opts) : RouteResult{Unroutable{}};
    if (auto* plan = std::get_if<RoutePlan>(&r)) {
      out.perWindow.emplace_back(std::move(*plan));
      const RoutePlan& now = *out.perWindow.back();
      if (previous && (previous->path != now.path || previous->encoderNode != now.encoderNode ||
                       previous->decoderNode != now.decoderNode)) {
        ++out.switchCount;
      }
    } else {
      out.perWindow.emplace_back(std::nullopt);
      out.gapWindows.push_back(static_cast<int>(w));
    }
    previous = out.perWindow.back() ? &*out.perWindow.back() : nullptr;
  }
  return out;
}

RouteRecord make_record(const RoutePlan& plan, int windowIndex, bool admitted) {
  RouteRecord r;
  r.appId = plan.appId;
  r.windowIndex = windowIndex;
  r.caseType = static_cast<int>(plan.caseType);
  r.path = plan.path;
  r.encoder = plan.encoderNode;
  r.decoder = plan.decoderNode;
  r.occupiedMbps = plan.occupiedBandwidthMbps;
  r.delayMs = plan.endToEndDelayMs;
  r.admitted = admitted;
  return r;
}

namespace {

std::string node_or_dash(const std::optional<NodeId>& n) { return n ? std::to_string(*n) : "-"; }

std::optional<NodeId> parse_optional_node(const std::string& s) {
  if (s == "-") return std::nullopt;
  return static_cast<NodeId>(parse_integer(s));
}

}  // namespace

void write_route_records(std::ostream& os, const std::vector<RouteRecord>& records) {
  os << "# gscsat routes v1\n";
  os << "# app_id window case path encoder decoder occupied_mbps delay_ms admitted\n";
  for (const auto& r : records) {
    std::string path;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      if (i) path += ',';
      path += std::to_string(r.path[i]);
    }
    os << r.appId << ' ' << r.windowIndex << ' ' << r.caseType << ' ' << (path.empty() ? "-" : path) << ' '
       << node_or_dash(r.encoder) << ' ' << node_or_dash(r.decoder) << ' ' << format_number(r.occupiedMbps)
       << ' ' << format_number(r.delayMs) << ' ' << (r.admitted ? 1 : 0) << '\n';
  }
}

std::vector<RouteRecord> read_route_records(std::istream& is) {
  std::vector<RouteRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.size() != 9) throw ValidationError("route record needs 9 fields: " + line);
    RouteRecord r;
    r.appId = static_cast<int>(parse_integer(f[0]));
    r.windowIndex = static_cast<int>(parse_integer(f[1]));
    r.caseType = static_cast<int>(parse_integer(f[2]));
    if (f[3] != "-") {
      std::stringstream ps(f[3]);
      for (std::string tok; std::getline(ps, tok, ',');) r.path.push_back(static_cast<NodeId>(parse_integer(tok)));
    }
    r.encoder = parse_optional_node(f[4]);
    r.decoder = parse_optional_node(f[5]);
    r.occupiedMbps = parse_number(f[6]);
    r.delayMs = parse_number(f[7]);
    r.admitted = parse_integer(f[8]) != 0;
    out.push_back(std::move(r));
  }
  return out;
}

std::string describe(const RoutePlan& plan, const SnapshotGraph& snapshot) {
  auto label = [&](NodeId id) {
    const NodeSpec* n = snapshot.find_node(id);
    return n && !n->name.empty() ? n->name : std::to_string(id);
  };
  std::ostringstream os;
  os << "app " << plan.appId << " case " << static_cast<int>(plan.caseType)
     << (plan.fallback ? " (traditional fallback)" : "") << '\n';
  os << "path:";
  for (std::size_t i = 0; i < plan.path.size(); ++i) {
    os << (i ? " -> " : " ") << label(plan.path[i]);
  }
  os << '\n';
  for (std::size_t i = 0; i < plan.stageLabels.size(); ++i) {
    os << "  " << label(plan.path[i]) << "-" << label(plan.path[i + 1]) << "  " << to_string(plan.stageLabels[i])
       << "  " << format_number(plan.perLinkRateMbps[i]) << " Mbps  " << format_number(plan.linkDelayMs[i])
       << " ms\n";
  }
  os << "encoder: " << (plan.encoderNode ? label(*plan.encoderNode) : "-") << '\n';
  os << "decoder: " << (plan.decoderNode ? label(*plan.decoderNode) : "-") << '\n';
  os << "occupied: " << format_number(plan.occupiedBandwidthMbps) << " Mbps\n";
  os << "delay: " << format_number(plan.endToEndDelayMs) << " ms\n";
  return os.str();
}

}  // namespace gscsat
