#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gscsat/common.hpp"
#include "gscsat/temporal_graph.hpp"

namespace gscsat {

/// Terminal capability combination of an application.
///  1: both terminals run the models; 2: sender encodes, a satellite decodes;
///  3: a satellite encodes, receiver decodes; 4: satellites do both.
enum class AppCase : int {
  TerminalsBoth = 1,
  SenderEncodes = 2,
  ReceiverDecodes = 3,
  SatellitesBoth = 4,
};

AppCase app_case_from_int(int value);

struct Application {
  int id = 0;
  AppCase caseType = AppCase::TerminalsBoth;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  double rateMbps = 0.0;
  KbId kb = 0;
  Ratio ratio{1, 1};
};

void validate_application(const Application& app, int kbCount);

/// Per-KB compression ratio and satellite-side model latencies. Terminal-side
/// encode/decode is free.
struct CompressionProfile {
  std::vector<Ratio> ratio;
  std::vector<double> encodeLatencyMs;
  std::vector<double> decodeLatencyMs;

  static CompressionProfile uniform(int kbCount, Ratio r, double encodeMs = 0.0, double decodeMs = 0.0);
  double encode_latency(KbId kb) const;
  double decode_latency(KbId kb) const;
};

enum class Stage : std::uint8_t { RawPre = 0, Compressed = 1, RawPost = 2 };
inline constexpr int kStageCount = 3;

std::string_view to_string(Stage s);

enum class Objective { DelayFirst, BandwidthFirst };

struct RoutingOptions {
  Objective objective = Objective::DelayFirst;
  /// Upper bound on search labels per query. shortest_delay_path throws
  /// SearchLimitExceeded past it; route() reports UnroutableReason::SearchLimit.
  std::size_t labelBudget = 1'000'000;
};

struct RoutePlan {
  int appId = 0;
  AppCase caseType = AppCase::TerminalsBoth;
  KbId kb = 0;
  std::vector<NodeId> path;
  std::vector<Stage> stageLabels;      // one per link
  std::vector<double> perLinkRateMbps;  // one per link
  std::vector<double> linkDelayMs;      // one per link
  std::optional<NodeId> encoderNode;    // satellite-side only
  std::optional<NodeId> decoderNode;    // satellite-side only
  double occupiedBandwidthMbps = 0.0;
  double endToEndDelayMs = 0.0;
  /// True when the plan is a raw-rate traditional route standing in for a GSC route.
  bool fallback = false;

  std::size_t hop_count() const { return stageLabels.size(); }
};

/// SearchLimit: the label budget ran out before a valid path was found or ruled out.
enum class UnroutableReason { Disconnected, NoMatchingKB, InsufficientCapacity, SearchLimit };

class SearchLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(UnroutableReason r);

struct Unroutable {
  UnroutableReason reason = UnroutableReason::Disconnected;
};

using RouteResult = std::variant<RoutePlan, Unroutable>;

/// State = node index in the snapshot * kStageCount + stage.
struct ExpandedGraph {
  enum class EdgeKind : std::uint8_t { Link, Encode, Decode };

  struct Edge {
    int to = 0;
    int link = -1;  // snapshot link index for Link edges
    std::int64_t delayNs = 0;
    std::int64_t bandwidthUnits = 0;
    EdgeKind kind = EdgeKind::Link;
  };

  const SnapshotGraph* snapshot = nullptr;
  std::vector<Stage> activeStages;
  int sourceState = -1;
  std::vector<int> acceptStates;
  /// Per-link rate on each stage (raw rate or rate x ratio).
  double stageRateMbps[kStageCount] = {0.0, 0.0, 0.0};
  /// Integer bandwidth weight per link on each stage; proportional to the stage rate.
  std::int64_t stageUnits[kStageCount] = {0, 0, 0};

  std::vector<int> offsets;  // CSR, size states + 1
  std::vector<Edge> edges;
  std::vector<int> reverseOffsets;
  std::vector<Edge> reverseEdges;  // Edge::to is the tail

  int state_count() const { return static_cast<int>(offsets.size()) - 1; }
  static int node_of(int state) { return state / kStageCount; }
  static Stage stage_of(int state) { return static_cast<Stage>(state % kStageCount); }
  static int make_state(int node, Stage s) { return node * kStageCount + static_cast<int>(s); }
};

struct ExpansionOptions {
  bool ignoreCapacity = false;
  /// Single raw stage at full rate (the traditional baseline).
  bool traditional = false;
};

/// Builds the stage-expanded graph for one application. Only the application's
/// own terminals may appear; other terminals never relay.
ExpandedGraph expand_stage_graph(const SnapshotGraph& snapshot, const Application& app,
                                 const CompressionProfile& profile, ExpansionOptions opts = {});

struct StatePath {
  std::vector<int> states;
  std::vector<int> edgeIndex;  // index into ExpandedGraph::edges per step
  std::int64_t delayNs = 0;
  std::int64_t bandwidthUnits = 0;
};

/// Best path from `srcState` to any of `dstStates` that never revisits a
/// physical node and never decodes on the node that just encoded. Ties are
/// broken by the secondary metric, then by lexicographic state sequence.
std::optional<StatePath> shortest_delay_path(const ExpandedGraph& graph, int srcState,
                                             const std::vector<int>& dstStates,
                                             const RoutingOptions& opts = {});

/// GSC route honoring the application's case.
RouteResult route(const Application& app, const SnapshotGraph& snapshot,
                  const CompressionProfile& profile, const RoutingOptions& opts = {});

/// Raw-rate shortest path (the traditional baseline); never sets encoder/decoder.
RouteResult route_traditional(const Application& app, const SnapshotGraph& snapshot,
                              const RoutingOptions& opts = {});

double occupied_bandwidth(const RoutePlan& plan);
double end_to_end_delay(const RoutePlan& plan, const CompressionProfile& profile);

/// Reserves the plan's per-link rate. Returns false and leaves the snapshot
/// untouched when some link lacks residual capacity.
[[nodiscard]] bool admit(const RoutePlan& plan, SnapshotGraph& snapshot);

struct ReplanResult {
  std::vector<std::optional<RoutePlan>> perWindow;
  std::vector<int> gapWindows;
  int switchCount = 0;
};

/// Routes independently in each snapshot. A switch is a pair of consecutive
/// routed windows whose node sequence or encoder/decoder placement differs.
ReplanResult replan_routes(const Application& app, const std::vector<SnapshotGraph>& snapshots,
                           const CompressionProfile& profile, const RoutingOptions& opts = {});

struct RouteRecord {
  int appId = 0;
  int windowIndex = 0;
  int caseType = 0;
  std::vector<NodeId> path;
  std::optional<NodeId> encoder;
  std::optional<NodeId> decoder;
  double occupiedMbps = 0.0;
  double delayMs = 0.0;
  bool admitted = false;

  friend bool operator==(const RouteRecord&, const RouteRecord&) = default;
};

RouteRecord make_record(const RoutePlan& plan, int windowIndex, bool admitted);

/// One record per line:
///   <app_id> <window> <case> <n0,n1,..|-> <encoder|-> <decoder|-> <occupied_mbps> <delay_ms> <admitted 0|1>
void write_route_records(std::ostream& os, const std::vector<RouteRecord>& records);
std::vector<RouteRecord> read_route_records(std::istream& is);

/// Human-readable multi-line description.
std::string describe(const RoutePlan& plan, const SnapshotGraph& snapshot);

}  // namespace gscsat
