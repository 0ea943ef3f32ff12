#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

namespace oracle {

namespace {

constexpr double kEps = 1e-9;

std::int64_t ns(double ms) { return std::llround(ms * 1e6); }

const SnapshotLink* link_between(const SnapshotGraph& g, NodeId a, NodeId b) {
  const int i = g.find_link(a, b);
  return i < 0 ? nullptr : &g.links()[i];
}

}  // namespace

std::optional<BruteRoute> brute_force_route(const Application& app, const SnapshotGraph& g,
                                            const CompressionProfile& profile, bool traditional,
                                            Objective objective) {
  const double raw = app.rateMbps;
  const double comp = app.rateMbps * static_cast<double>(app.ratio.num) / static_cast<double>(app.ratio.den);
  const std::int64_t rawUnits = traditional ? 1 : app.ratio.den;
  const std::int64_t compUnits = app.ratio.num;
  const double encMs = profile.encode_latency(app.kb);
  const double decMs = profile.decode_latency(app.kb);

  std::optional<BruteRoute> best;
  auto key = [&](const BruteRoute& r) {
    return objective == Objective::DelayFirst ? std::make_pair(r.delayNs, r.units)
                                              : std::make_pair(r.units, r.delayNs);
  };

  // Scores one placement; enc/dec are path positions, -1 when absent or terminal-side.
  auto consider = [&](const std::vector<NodeId>& path, int compFrom, int compTo, int enc, int dec) {
    BruteRoute r;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const SnapshotLink* l = link_between(g, path[i], path[i + 1]);
      const bool compressed = !traditional && static_cast<int>(i) >= compFrom && static_cast<int>(i) < compTo;
      const double need = compressed ? comp : raw;
      if (l->residualMbps + kEps < need) return;
      r.delayNs += ns(l->propagationDelayMs);
      r.delayMs += l->propagationDelayMs;
      r.units += compressed ? compUnits : rawUnits;
      r.occupiedMbps += need;
    }
    if (enc >= 0) {
      r.delayNs += ns(encMs);
      r.delayMs += encMs;
      r.encoder = path[enc];
    }
    if (dec >= 0) {
      r.delayNs += ns(decMs);
      r.delayMs += decMs;
      r.decoder = path[dec];
    }
    r.path = path;
    if (!best || key(r) < key(*best)) best = r;
  };

  auto isSat = [&](NodeId id) { return g.find_node(id)->is_satellite(); };
  auto canEnc = [&](NodeId id) { return isSat(id) && g.find_node(id)->can_encode(app.kb); };
  auto canDec = [&](NodeId id) { return isSat(id) && g.find_node(id)->can_decode(app.kb); };

  auto placements = [&](const std::vector<NodeId>& path) {
    const int k = static_cast<int>(path.size()) - 1;  // links
    if (traditional) {
      consider(path, 0, 0, -1, -1);
      return;
    }
    switch (app.caseType) {
      case AppCase::TerminalsBoth:
        consider(path, 0, k, -1, -1);
        break;
      case AppCase::SenderEncodes:
        for (int j = 1; j < k; ++j) {
          if (canDec(path[j])) consider(path, 0, j, -1, j);
        }
        break;
      case AppCase::ReceiverDecodes:
        for (int i = 1; i < k; ++i) {
          if (canEnc(path[i])) consider(path, i, k, i, -1);
        }
        break;
      case AppCase::SatellitesBoth:
        for (int i = 1; i < k; ++i) {
          for (int j = i + 1; j < k; ++j) {
            if (canEnc(path[i]) && canDec(path[j])) consider(path, i, j, i, j);
          }
        }
        break;
    }
  };

  std::vector<NodeId> path{app.src};
  std::set<NodeId> onPath{app.src};
  std::function<void(NodeId)> dfs = [&](NodeId v) {
    if (v == app.dst) {
      placements(path);
      return;
    }
    for (const auto& l : g.links()) {
      if (l.a != v && l.b != v) continue;
      const NodeId w = l.other(v);
      if (onPath.count(w)) continue;
      if (w != app.dst && !isSat(w)) continue;
      path.push_back(w);
      onPath.insert(w);
      dfs(w);
      onPath.erase(w);
      path.pop_back();
    }
  };
  dfs(app.src);
  return best;
}

std::string check_plan(const RoutePlan& plan, const Application& app, const SnapshotGraph& g, bool traditional) {
  std::ostringstream err;
  const auto& p = plan.path;
  if (p.size() < 2 || p.front() != app.src || p.back() != app.dst) return "path endpoints wrong";
  std::set<NodeId> distinct(p.begin(), p.end());
  if (distinct.size() != p.size()) return "path repeats a node";
  if (plan.stageLabels.size() + 1 != p.size() || plan.perLinkRateMbps.size() + 1 != p.size()) {
    return "per-link vectors misaligned";
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!g.find_node(p[i])->is_satellite()) return "terminal used as relay";
  }
  // Stage blocks must appear in order raw-pre, compressed, raw-post.
  int last = 0;
  for (Stage s : plan.stageLabels) {
    if (static_cast<int>(s) < last) return "stage order violated";
    last = static_cast<int>(s);
  }
  const double comp = app.rateMbps * app.ratio.value();
  double sum = 0.0;
  int nComp = 0;
  int nRaw = 0;
  for (std::size_t i = 0; i < plan.stageLabels.size(); ++i) {
    if (!link_between(g, p[i], p[i + 1])) return "link missing";
    const bool compressed = plan.stageLabels[i] == Stage::Compressed;
    const double want = compressed ? comp : app.rateMbps;
    if (std::abs(plan.perLinkRateMbps[i] - want) > 1e-9) return "per-link rate wrong";
    sum += plan.perLinkRateMbps[i];
    (compressed ? nComp : nRaw)++;
  }
  if (std::abs(plan.occupiedBandwidthMbps - sum) > 1e-9) return "occupied bandwidth is not the link sum";
  if (std::abs(plan.occupiedBandwidthMbps - app.rateMbps * (app.ratio.value() * nComp + nRaw)) > 1e-6) {
    return "conservation identity violated";
  }
  auto countStage = [&](Stage s) { return std::count(plan.stageLabels.begin(), plan.stageLabels.end(), s); };
  if (traditional) {
    if (nComp != 0 || plan.encoderNode || plan.decoderNode) return "traditional plan compresses";
    return {};
  }
  switch (app.caseType) {
    case AppCase::TerminalsBoth:
      if (nRaw != 0 || plan.encoderNode || plan.decoderNode) return "case 1 must be fully compressed";
      break;
    case AppCase::SenderEncodes:
      if (countStage(Stage::RawPre) || !plan.decoderNode || plan.encoderNode) return "case 2 stage layout";
      break;
    case AppCase::ReceiverDecodes:
      if (countStage(Stage::RawPost) || !plan.encoderNode || plan.decoderNode) return "case 3 stage layout";
      break;
    case AppCase::SatellitesBoth:
      if (!plan.encoderNode || !plan.decoderNode || nComp == 0) return "case 4 stage layout";
      break;
  }
  if (plan.encoderNode && plan.decoderNode) {
    const auto ei = std::find(p.begin(), p.end(), *plan.encoderNode) - p.begin();
    const auto di = std::find(p.begin(), p.end(), *plan.decoderNode) - p.begin();
    if (!(ei < di)) return "encoder does not precede decoder";
  }
  if (plan.encoderNode && !g.find_node(*plan.encoderNode)->can_encode(app.kb)) return "encoder lacks the model";
  if (plan.decoderNode && !g.find_node(*plan.decoderNode)->can_decode(app.kb)) return "decoder lacks the model";
  return err.str();
}

RandomRoutingCase random_routing_case(Rng& rng, int maxNodes) {
  const int n = 3 + static_cast<int>(rng.index(static_cast<std::uint64_t>(maxNodes - 2)));  // 3..maxNodes
  const int kbCount = 1 + static_cast<int>(rng.index(2));
  const bool thirdTerminal = n >= 5 && rng.uniform01() < 0.3;
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < n; ++i) {
    const bool terminal = i < 2 || (thirdTerminal && i == 2);
    if (terminal) {
      nodes.push_back(make_node(i, NodeKind::Terminal, kbCount));
      continue;
    }
    const bool ai = rng.uniform01() < 0.6;
    NodeSpec s = make_node(i, ai ? NodeKind::AISat : NodeKind::CommSat, kbCount);
    if (ai) {
      s.computeCapacity = 2 * kbCount;
      for (int k = 0; k < kbCount; ++k) {
        s.encoderCaps[k] = rng.uniform01() < 0.5 ? 1 : 0;
        s.decoderCaps[k] = rng.uniform01() < 0.5 ? 1 : 0;
      }
    }
    nodes.push_back(s);
  }
  static constexpr double kDelays[] = {1.0, 2.0, 2.5, 3.0, 5.0};
  static constexpr double kRates[] = {20.0, 40.0, 60.0, 100.0};
  static constexpr double kResidualShare[] = {1.0, 1.0, 0.5, 0.2};
  std::vector<SnapshotLink> links;
  const double density = 0.3 + 0.4 * rng.uniform01();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform01() >= density) continue;
      const double rate = kRates[rng.index(4)];
      const bool sgl = !nodes[a].is_satellite() || !nodes[b].is_satellite();
      links.push_back({a, b, sgl ? LinkKind::SGL : LinkKind::ISL, rate, rate * kResidualShare[rng.index(4)],
                       kDelays[rng.index(5)]});
    }
  }
  RandomRoutingCase c{SnapshotGraph(TimeWindow{0, 0.0, 60.0}, kbCount, std::move(nodes), std::move(links)), {}, {}};
  static constexpr Ratio kRatios[] = {{1, 8}, {1, 4}, {1, 2}, {1, 1}};
  static constexpr double kAppRates[] = {10.0, 20.0, 30.0};
  c.app.id = 0;
  c.app.caseType = app_case_from_int(1 + static_cast<int>(rng.index(4)));
  c.app.src = 0;
  c.app.dst = 1;
  c.app.rateMbps = kAppRates[rng.index(3)];
  c.app.kb = static_cast<KbId>(rng.index(static_cast<std::uint64_t>(kbCount)));
  c.app.ratio = kRatios[rng.index(4)];
  static constexpr double kLatency[] = {0.0, 0.0, 0.5, 2.0};
  c.profile = CompressionProfile::uniform(kbCount, Ratio{1, 1});
  for (int k = 0; k < kbCount; ++k) {
    c.profile.encodeLatencyMs[k] = kLatency[rng.index(4)];
    c.profile.decodeLatencyMs[k] = kLatency[rng.index(4)];
  }
  return c;
}

double evaluate_reference(const DeploymentProblem& problem, const std::vector<Assignment>& assignments) {
  std::vector<NodeSpec> nodes = problem.snapshot.nodes();
  for (const Assignment& a : assignments) {
    for (NodeSpec& n : nodes) {
      if (n.id != a.node) continue;
      auto& caps = a.role == ModelRole::Encoder ? n.encoderCaps : n.decoderCaps;
      caps[a.kb] += 1;
    }
  }
  SnapshotGraph g(problem.snapshot.window(), problem.snapshot.kb_count(), nodes, problem.snapshot.links());
  std::vector<std::size_t> order(problem.apps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return problem.apps[a].id < problem.apps[b].id; });
  const auto& o = problem.options;
  double total = 0.0;
  for (std::size_t i : order) {
    const Application& app = problem.apps[i];
    const double bound =
        problem.delayBoundMs.empty() ? std::numeric_limits<double>::infinity() : problem.delayBoundMs[i];
    bool served = false;
    for (int attempt = 0; attempt < 2 && !served; ++attempt) {
      RouteResult r = attempt == 0 ? route(app, g, problem.profile, o.routing) : route_traditional(app, g, o.routing);
      const RoutePlan* p = std::get_if<RoutePlan>(&r);
      if (!p || p->endToEndDelayMs > bound) continue;
      if (!admit(*p, g)) continue;
      total += o.weightBandwidth * p->occupiedBandwidthMbps + o.weightDelay * p->endToEndDelayMs;
      served = true;
    }
    if (!served) total += app.rateMbps * o.penaltyHops;
  }
  return total;
}

double enumerate_deployment_optimum(const DeploymentProblem& problem) {
  const int kbs = problem.snapshot.kb_count();
  std::vector<NodeId> cands = problem.candidates;
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  // Every (kb, role) pair per candidate, bitmask over 2 * kbs entries.
  const int perNode = 2 * kbs;
  std::vector<std::vector<std::uint32_t>> masks;
  for (NodeId c : cands) {
    const NodeSpec& n = *problem.snapshot.find_node(c);
    int used = 0;
    for (int v : n.encoderCaps) used += v;
    for (int v : n.decoderCaps) used += v;
    const int free = std::max(0, n.computeCapacity - used);
    std::vector<std::uint32_t> m;
    for (std::uint32_t mask = 0; mask < (1u << perNode); ++mask) {
      int bits = 0;
      for (int b = 0; b < perNode; ++b) bits += (mask >> b) & 1u;
      if (bits <= free) m.push_back(mask);
    }
    masks.push_back(std::move(m));
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(cands.size(), 0);
  for (;;) {
    std::vector<Assignment> as;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const std::uint32_t mask = masks[c][pick[c]];
      for (int b = 0; b < perNode; ++b) {
        if (mask & (1u << b)) {
          as.push_back({cands[c], static_cast<KbId>(b / 2), b % 2 == 0 ? ModelRole::Encoder : ModelRole::Decoder});
        }
      }
    }
    best = std::min(best, evaluate_reference(problem, as));
    std::size_t c = 0;
    while (c < cands.size() && ++pick[c] == masks[c].size()) pick[c++] = 0;
    if (c == cands.size()) break;
  }
  return best;
}

DeploymentProblem random_deployment_problem(Rng& rng, int maxCandidates) {
  const int kbCount = 1 + static_cast<int>(rng.index(2));
  const int candCount = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(maxCandidates)));
  const int commCount = static_cast<int>(rng.index(3));
  const int terminals = 2 + static_cast<int>(rng.index(2));
  std::vector<NodeSpec> nodes;
  int id = 0;
  for (int t = 0; t < terminals; ++t) nodes.push_back(make_node(id++, NodeKind::Terminal, kbCount));
  std::vector<NodeId> cands;
  for (int c = 0; c < candCount; ++c) {
    NodeSpec s = make_node(id, NodeKind::AISat, kbCount);
    s.computeCapacity = 1 + static_cast<int>(rng.index(2));
    if (rng.uniform01() < 0.2) {
      s.encoderCaps[rng.index(static_cast<std::uint64_t>(kbCount))] = 1;
    }
    nodes.push_back(s);
    cands.push_back(id++);
  }
  for (int c = 0; c < commCount; ++c) nodes.push_back(make_node(id++, NodeKind::CommSat, kbCount));
  const int n = id;

  // A random spanning tree over satellites keeps most instances connected; extra links add choice.
  std::vector<SnapshotLink> links;
  std::set<std::pair<int, int>> used;
  auto add = [&](int a, int b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) return;
    const bool sgl = a < terminals;
    const double rate = 40.0 + 20.0 * static_cast<double>(rng.index(4));
    links.push_back({a, b, sgl ? LinkKind::SGL : LinkKind::ISL, rate, rate, 1.0 + static_cast<double>(rng.index(4))});
  };
  for (int v = terminals + 1; v < n; ++v) add(v, terminals + static_cast<int>(rng.index(static_cast<std::uint64_t>(v - terminals))));
  for (int t = 0; t < terminals; ++t) {
    add(t, terminals + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - terminals))));
    if (rng.uniform01() < 0.5) add(t, terminals + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - terminals))));
  }
  const int extra = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
  for (int e = 0; e < extra; ++e) {
    add(terminals + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - terminals))),
        terminals + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - terminals))));
  }

  DeploymentProblem p{SnapshotGraph(TimeWindow{0, 0.0, 60.0}, kbCount, std::move(nodes), std::move(links)),
                      cands, {}, {}, CompressionProfile::uniform(kbCount, Ratio{1, 1}), {}};
  const int appCount = 1 + static_cast<int>(rng.index(4));
  static constexpr Ratio kRatios[] = {{1, 8}, {1, 4}, {1, 2}};
  bool bounded = rng.uniform01() < 0.3;
  for (int a = 0; a < appCount; ++a) {
    Application app;
    app.id = a;
    app.caseType = app_case_from_int(1 + static_cast<int>(rng.index(4)));
    app.src = static_cast<NodeId>(rng.index(static_cast<std::uint64_t>(terminals)));
    app.dst = static_cast<NodeId>((app.src + 1 + static_cast<NodeId>(rng.index(static_cast<std::uint64_t>(terminals - 1)))) % terminals);
    app.rateMbps = 5.0 + 5.0 * static_cast<double>(rng.index(8));
    app.kb = static_cast<KbId>(rng.index(static_cast<std::uint64_t>(kbCount)));
    app.ratio = kRatios[rng.index(3)];
    p.apps.push_back(app);
    if (bounded) p.delayBoundMs.push_back(4.0 + static_cast<double>(rng.index(8)));
  }
  return p;
}

ContactPlan random_contact_plan(Rng& rng, double horizon, int contacts) {
  ContactPlan plan;
  plan.horizonStart = 0.0;
  plan.horizonEnd = horizon;
  // One contact per pair so same-pair overlaps cannot arise.
  for (int c = 0; c < contacts; ++c) {
    double a = rng.uniform(0.0, horizon);
    double b = rng.uniform(0.0, horizon);
    if (rng.uniform01() < 0.3) a = std::floor(a / 10.0) * 10.0;  // shared boundaries
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    plan.contacts.push_back({c, c + 1000, a, b, 300.0, 5.0, LinkKind::ISL});
  }
  return plan;
}

Lemma1Tally check_lemma1(Rng& rng, int paths) {
  Lemma1Tally tally;
  const Ratio ratios[] = {{1, 8}, {1, 4}, {1, 2}, {3, 4}};
  for (int t = 0; t < paths; ++t) {
    const int k = 3 + static_cast<int>(rng.index(8));
    const double rate = 5.0 + static_cast<double>(rng.index(96));
    const Ratio rho = ratios[rng.index(4)];
    std::vector<SnapshotLink> links;
    for (int i = 0; i < k; ++i) {
      links.push_back({i, i + 1, LinkKind::ISL, 1000.0, 1000.0, 1.0 + static_cast<double>(rng.index(10))});
    }
    Application app{0, AppCase::SatellitesBoth, 0, k, rate, 0, rho};
    const auto profile = CompressionProfile::uniform(1, rho);

    // occ[i][j]: occupied bandwidth with the encoder at position i, decoder at j.
    std::vector<std::vector<double>> occ(k + 1, std::vector<double>(k + 1, -1.0));
    for (int i = 1; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        std::vector<NodeSpec> nodes;
        for (int n = 0; n <= k; ++n) {
          const bool terminal = n == 0 || n == k;
          NodeSpec node = make_node(n, terminal ? NodeKind::Terminal : NodeKind::AISat, 1);
          if (n == i) node.encoderCaps[0] = 1;
          if (n == j) node.decoderCaps[0] = 1;
          node.computeCapacity = node.used_slots();
          nodes.push_back(node);
        }
        const SnapshotGraph g({0, 0.0, 60.0}, 1, nodes, links);
        const auto r = route(app, g, profile);
        ++tally.placements;
        const auto* plan = std::get_if<RoutePlan>(&r);
        const double expected = rate * (i + (k - j)) + rate * rho.value() * (j - i);
        if (!plan || plan->encoderNode != i || plan->decoderNode != j ||
            std::abs(occupied_bandwidth(*plan) - expected) > 1e-9) {
          ++tally.violations;
          continue;
        }
        occ[i][j] = occupied_bandwidth(*plan);
      }
    }
    for (int i = 1; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (i > 1 && occ[i - 1][j] > occ[i][j] + 1e-9) ++tally.violations;
        if (j + 1 < k && occ[i][j + 1] > occ[i][j] + 1e-9) ++tally.violations;
      }
    }
    ++tally.paths;
  }
  return tally;
}

ContactPlan fig2_plan() {
  const auto contact = [](NodeId a, NodeId b, double s, double e) {
    return Contact{a, b, s * 60.0, e * 60.0, 300.0, 5.0, a == 0 || b == 4 ? LinkKind::SGL : LinkKind::ISL};
  };
  return {{contact(0, 1, 0, 15), contact(1, 2, 5, 20), contact(2, 3, 10, 25), contact(3, 4, 10, 20)}, 0.0, 1500.0};
}

std::vector<NodeSpec> fig2_nodes() {
  return {make_node(0, NodeKind::Terminal, 1, "S"), make_node(1, NodeKind::CommSat, 1, "A"),
          make_node(2, NodeKind::CommSat, 1, "B"), make_node(3, NodeKind::CommSat, 1, "C"),
          make_node(4, NodeKind::Terminal, 1, "D")};
}

std::vector<NodeSpec> nodes_of(const ContactPlan& plan) {
  std::set<NodeId> ids;
  for (const auto& c : plan.contacts) {
    ids.insert(c.nodeA);
    ids.insert(c.nodeB);
  }
  std::vector<NodeSpec> out;
  for (NodeId id : ids) out.push_back(make_node(id, NodeKind::CommSat, 1));
  return out;
}

std::string check_partition(const std::vector<TimeWindow>& windows, double start, double end, double lambda) {
  if (windows.empty()) return "no windows";
  if (windows.front().start != start) return "first window does not start at the horizon start";
  if (windows.back().end != end) return "last window does not end at the horizon end";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].index != static_cast<int>(i)) return "window indices are not 0..n-1";
    if (!(windows[i].end > windows[i].start)) return "empty window";
    if (i > 0 && windows[i].start != windows[i - 1].end) return "gap or overlap between windows";
    if (end - start >= lambda && windows[i].length() < lambda) return "window shorter than lambda";
  }
  return {};
}

}  // namespace oracle
