#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gscsat/common.hpp"
#include "gscsat/geometry.hpp"
#include "gscsat/node.hpp"

namespace gscsat {

/// Half-open interval [start, end).
struct TimeWindow {
  int index = 0;
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct DiscretizationConfig {
  double minServiceDurationS = 60.0;
};

struct SnapshotLink {
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  LinkKind kind = LinkKind::ISL;
  double rateMbps = 0.0;
  double residualMbps = 0.0;
  double propagationDelayMs = 0.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

/// Static topology valid for one time window. Topology is fixed once built;
/// residual bandwidth and capability vectors are the only mutable state.
class SnapshotGraph {
 public:
  struct Adjacent {
    int neighbor;  // index into nodes()
    int link;      // index into links()
  };

  SnapshotGraph() = default;
  SnapshotGraph(TimeWindow window, int kbCount, std::vector<NodeSpec> nodes,
                std::vector<SnapshotLink> links);

  const TimeWindow& window() const { return window_; }
  int kb_count() const { return kbCount_; }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<SnapshotLink>& links() const { return links_; }
  const std::vector<Adjacent>& adjacent(int nodeIndex) const { return adjacency_[nodeIndex]; }

  /// Index into nodes(), or -1.
  int index_of(NodeId id) const;
  const NodeSpec* find_node(NodeId id) const;
  NodeSpec* find_node(NodeId id);
  const NodeSpec* find_node_by_name(std::string_view name) const;
  /// Index into links() of the link joining a and b, or -1.
  int find_link(NodeId a, NodeId b) const;

  SnapshotLink& link(int index) { return links_[index]; }

 private:
  TimeWindow window_;
  int kbCount_ = 0;
  std::vector<NodeSpec> nodes_;
  std::vector<SnapshotLink> links_;
  std::unordered_map<NodeId, int> indexById_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

/// Strictly increasing boundaries: every contact start/end plus the horizon endpoints.
std::vector<double> sort_timestamps(const ContactPlan& plan);

/// Left-to-right accumulation: a window is emitted once it spans at least the
/// minimum service duration; a short trailing remainder joins the previous window.
std::vector<TimeWindow> merge_windows(const std::vector<double>& boundaries,
                                      const DiscretizationConfig& cfg);

/// Links are the contacts whose interval covers the entire window. Nodes are
/// every terminal plus every node incident to a link.
SnapshotGraph build_snapshot(const ContactPlan& plan, const TimeWindow& window,
                             const std::vector<NodeSpec>& nodes, int kbCount);

/// Earliest maximal interval during which every hop of `path` has a contact.
/// Throws ValidationError if some hop never has a contact.
std::optional<TimeWindow> stable_interval(const ContactPlan& plan, const std::vector<NodeId>& path);

/// Record format:
///   window <index> <start_s> <end_s>
///   kbs <count>
///   node <id> <comm|ai|terminal> <slots> <enc e0,e1,..|-> <dec d0,d1,..|-> <name|->
///   link <a> <b> <ISL|SGL> <rate_mbps> <residual_mbps> <delay_ms>
void write_snapshot(std::ostream& os, const SnapshotGraph& g);
SnapshotGraph read_snapshot(std::istream& is);

void write_windows(std::ostream& os, const std::vector<TimeWindow>& windows);
std::vector<TimeWindow> read_windows(std::istream& is);

}  // namespace gscsat
