#include "gscsat/temporal_graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gscsat {

SnapshotGraph::SnapshotGraph(TimeWindow window, int kbCount, std::vector<NodeSpec> nodes,
                             std::vector<SnapshotLink> links)
    : window_(window), kbCount_(kbCount), nodes_(std::move(nodes)), links_(std::move(links)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const auto& l, const auto& r) { return l.id < r.id; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    validate_node(nodes_[i], kbCount_);
    if (!indexById_.emplace(nodes_[i].id, static_cast<int>(i)).second) {
      throw ValidationError("duplicate node id " + std::to_string(nodes_[i].id));
    }
  }
  adjacency_.resize(nodes_.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const auto& lk = links_[l];
    const int ia = index_of(lk.a);
    const int ib = index_of(lk.b);
    if (ia < 0 || ib < 0 || ia == ib) {
      throw ValidationError("link " + std::to_string(lk.a) + "-" + std::to_string(lk.b) +
                            " references an unknown or identical endpoint");
    }
    if (!(lk.residualMbps >= 0.0 && lk.residualMbps <= lk.rateMbps)) {
      throw ValidationError("link residual must lie in [0, rate]");
    }
    if (!seen.insert({std::min(lk.a, lk.b), std::max(lk.a, lk.b)}).second) {
      throw ValidationError("duplicate link " + std::to_string(lk.a) + "-" + std::to_string(lk.b));
    }
    adjacency_[ia].push_back({ib, static_cast<int>(l)});
    adjacency_[ib].push_back({ia, static_cast<int>(l)});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [&](const Adjacent& l, const Adjacent& r) {
      return nodes_[l.neighbor].id < nodes_[r.neighbor].id;
    });
  }
}

int SnapshotGraph::index_of(NodeId id) const {
  auto it = indexById_.find(id);
  return it == indexById_.end() ? -1 : it->second;
}

const NodeSpec* SnapshotGraph::find_node(NodeId id) const {
  const int i = index_of(id);
  return i < 0 ? nullptr : &nodes_[i];
}

NodeSpec* SnapshotGraph::find_node(NodeId id) {
  const int i = index_of(id);
  return i < 0 ? nullptr : &nodes_[i];
}

const NodeSpec* SnapshotGraph::find_node_by_name(std::string_view name) const {
  for (const auto& n : nodes_) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

int SnapshotGraph::find_link(NodeId a, NodeId b) const {
  const int ia = index_of(a);
  if (ia < 0) return -1;
  for (const auto& adj : adjacency_[ia]) {
    if (nodes_[adj.neighbor].id == b) return adj.link;
  }
  return -1;
}

std::vector<double> sort_timestamps(const ContactPlan& plan) {
  std::vector<double> ts;
  ts.reserve(plan.contacts.size() * 2 + 2);
  ts.push_back(plan.horizonStart);
  ts.push_back(plan.horizonEnd);
  for (const auto& c : plan.contacts) {
    ts.push_back(c.startTime);
    ts.push_back(c.endTime);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::vector<TimeWindow> merge_windows(const std::vector<double>& boundaries,
                                      const DiscretizationConfig& cfg) {
  if (boundaries.size() < 2) throw ValidationError("need at least two boundaries");
  if (!(cfg.minServiceDurationS >= 0.0)) throw ValidationError("minimum service duration must be >= 0");
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (!(boundaries[i] > boundaries[i - 1])) throw ValidationError("boundaries must be strictly increasing");
  }
  std::vector<TimeWindow> windows;
  double open = boundaries.front();
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] - open >= cfg.minServiceDurationS) {
      windows.push_back({static_cast<int>(windows.size()), open, boundaries[i]});
      open = boundaries[i];
    }
  }
  if (open < boundaries.back()) {
    if (windows.empty()) {
      windows.push_back({0, open, boundaries.back()});
    } else {
      windows.back().end = boundaries.back();
    }
  }
  return windows;
}

SnapshotGraph build_snapshot(const ContactPlan& plan, const TimeWindow& window,
                             const std::vector<NodeSpec>& nodes, int kbCount) {
  if (window.start < plan.horizonStart || window.end > plan.horizonEnd) {
    throw ValidationError("window lies outside the contact plan horizon");
  }
  std::unordered_map<NodeId, const NodeSpec*> byId;
  for (const auto& n : nodes) byId.emplace(n.id, &n);

  std::vector<SnapshotLink> links;
  std::set<NodeId> incident;
  for (const auto& c : plan.contacts) {
    if (c.startTime <= window.start && c.endTime >= window.end) {
      if (!byId.count(c.nodeA) || !byId.count(c.nodeB)) {
        throw ValidationError("contact references a node missing from the node list");
      }
      links.push_back({c.nodeA, c.nodeB, c.linkKind, c.rateMbps, c.rateMbps, c.propagationDelayMs});
      incident.insert(c.nodeA);
      incident.insert(c.nodeB);
    }
  }
  std::vector<NodeSpec> present;
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::Terminal || incident.count(n.id)) present.push_back(n);
  }
  return SnapshotGraph(window, kbCount, std::move(present), std::move(links));
}

std::optional<TimeWindow> stable_interval(const ContactPlan& plan, const std::vector<NodeId>& path) {
  if (path.size() < 2) throw ValidationError("path needs at least one hop");
  using Intervals = std::vector<std::pair<double, double>>;
  Intervals current{{plan.horizonStart, plan.horizonEnd}};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const NodeId a = std::min(path[i - 1], path[i]);
    const NodeId b = std::max(path[i - 1], path[i]);
    Intervals hop;
    for (const auto& c : plan.contacts) {
      if (std::min(c.nodeA, c.nodeB) == a && std::max(c.nodeA, c.nodeB) == b) {
        hop.emplace_back(c.startTime, c.endTime);
      }
    }
    if (hop.empty()) {
      throw ValidationError("no contact between nodes " + std::to_string(a) + " and " + std::to_string(b));
    }
    std::sort(hop.begin(), hop.end());
    Intervals next;
    for (const auto& [s0, e0] : current) {
      for (const auto& [s1, e1] : hop) {
        const double s = std::max(s0, s1);
        const double e = std::min(e0, e1);
        if (s < e) next.emplace_back(s, e);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
    if (current.empty()) return std::nullopt;
  }
  return TimeWindow{0, current.front().first, current.front().second};
}

namespace {

std::string join_caps(const std::vector<int>& caps) {
  if (caps.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(caps[i]);
  }
  return out;
}

std::vector<int> split_caps(const std::string& text) {
  std::vector<int> caps;
  if (text == "-") return caps;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) caps.push_back(static_cast<int>(parse_integer(tok)));
  return caps;
}

}  // namespace

void write_snapshot(std::ostream& os, const SnapshotGraph& g) {
  os << "# gscsat snapshot v1\n";
  os << "window " << g.window().index << ' ' << format_number(g.window().start) << ' '
     << format_number(g.window().end) << '\n';
  os << "kbs " << g.kb_count() << '\n';
  for (const auto& n : g.nodes()) {
    os << "node " << n.id << ' ' << to_string(n.kind) << ' ' << n.computeCapacity << ' '
       << join_caps(n.encoderCaps) << ' ' << join_caps(n.decoderCaps) << ' '
       << (n.name.empty() ? "-" : n.name) << '\n';
  }
  for (const auto& l : g.links()) {
    os << "link " << l.a << ' ' << l.b << ' ' << to_string(l.kind) << ' ' << format_number(l.rateMbps)
       << ' ' << format_number(l.residualMbps) << ' ' << format_number(l.propagationDelayMs) << '\n';
  }
}

SnapshotGraph read_snapshot(std::istream& is) {
  TimeWindow window;
  int kbCount = -1;
  bool sawWindow = false;
  std::vector<NodeSpec> nodes;
  std::vector<SnapshotLink> links;
  std::string line;
  int lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    try {
      if (tag == "window" && f.size() == 3) {
        window = {static_cast<int>(parse_integer(f[0])), parse_number(f[1]), parse_number(f[2])};
        sawWindow = true;
      } else if (tag == "kbs" && f.size() == 1) {
        kbCount = static_cast<int>(parse_integer(f[0]));
      } else if (tag == "node" && f.size() == 6) {
        NodeSpec n;
        n.id = static_cast<NodeId>(parse_integer(f[0]));
        n.kind = parse_node_kind(f[1]);
        n.computeCapacity = static_cast<int>(parse_integer(f[2]));
        n.encoderCaps = split_caps(f[3]);
        n.decoderCaps = split_caps(f[4]);
        n.name = f[5] == "-" ? std::string() : f[5];
        nodes.push_back(std::move(n));
      } else if (tag == "link" && f.size() == 6) {
        SnapshotLink l;
        l.a = static_cast<NodeId>(parse_integer(f[0]));
        l.b = static_cast<NodeId>(parse_integer(f[1]));
        l.kind = parse_link_kind(f[2]);
        l.rateMbps = parse_number(f[3]);
        l.residualMbps = parse_number(f[4]);
        l.propagationDelayMs = parse_number(f[5]);
        if (!(l.rateMbps > 0.0) || !(l.propagationDelayMs >= 0.0)) {
          throw ValidationError("link rate must be positive and delay non-negative");
        }
        links.push_back(l);
      } else {
        throw ValidationError("unrecognized record");
      }
    } catch (const ValidationError& e) {
      throw ValidationError("snapshot line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  if (!sawWindow || kbCount < 0) throw ValidationError("snapshot lacks window or kbs record");
  return SnapshotGraph(window, kbCount, std::move(nodes), std::move(links));
}

void write_windows(std::ostream& os, const std::vector<TimeWindow>& windows) {
  os << "# gscsat windows v1\n# window index start_s end_s\n";
  for (const auto& w : windows) {
    os << "window " << w.index << ' ' << format_number(w.start) << ' ' << format_number(w.end) << '\n';
  }
}

std::vector<TimeWindow> read_windows(std::istream& is) {
  std::vector<TimeWindow> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, idx, s, e, extra;
    ls >> tag >> idx >> s >> e;
    if (tag != "window" || e.empty() || (ls >> extra)) throw ValidationError("bad window record: " + line);
    out.push_back({static_cast<int>(parse_integer(idx)), parse_number(s), parse_number(e)});
  }
  return out;
}

}  // namespace gscsat
