#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gscsat/routing.hpp"
#include "gscsat/temporal_graph.hpp"

namespace gscsat {

enum class ModelRole { Encoder, Decoder };

std::string_view to_string(ModelRole role);
ModelRole parse_model_role(std::string_view text);

struct Assignment {
  NodeId node = kNoNode;
  KbId kb = 0;
  ModelRole role = ModelRole::Encoder;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

enum class AppOutcome { Gsc, Fallback, Infeasible };

std::string_view to_string(AppOutcome o);

struct AppEvaluation {
  int appId = 0;
  AppOutcome outcome = AppOutcome::Infeasible;
  double occupiedMbps = 0.0;
  double delayMs = 0.0;

  friend bool operator==(const AppEvaluation&, const AppEvaluation&) = default;
};

struct DeploymentPlan {
  std::vector<Assignment> assignments;  // sorted
  double objectiveValue = 0.0;
  std::vector<AppEvaluation> apps;      // per-application diagnostics
  std::string solver;
  std::optional<double> gap;            // relative gap to the exact optimum, when known
};

struct DeploymentOptions {
  /// An application served by neither GSC nor the raw fallback costs rate x penaltyHops.
  double penaltyHops = 16.0;
  double weightBandwidth = 1.0;
  double weightDelay = 0.0;
  RoutingOptions routing;
  /// Largest search space solve_exact accepts.
  std::size_t enumerationLimit = 2'000'000;
};

struct DeploymentProblem {
  SnapshotGraph snapshot;
  std::vector<NodeId> candidates;
  std::vector<Application> apps;
  /// Per application, aligned with `apps`; empty means unbounded.
  std::vector<double> delayBoundMs;
  CompressionProfile profile;
  DeploymentOptions options;
};

void validate_problem(const DeploymentProblem& problem);

/// (kb, role) pairs that some application could use on a satellite.
std::vector<std::pair<KbId, ModelRole>> relevant_models(const DeploymentProblem& problem);

/// Applies `assignments`, then routes every application in ascending id with
/// sequential admission. Each application takes its GSC route when it meets
/// the delay bound, else the raw traditional route, else the penalty.
DeploymentPlan evaluate_assignments(const DeploymentProblem& problem, std::vector<Assignment> assignments);

/// Minimum-objective assignment by exhaustive enumeration over relevant models.
DeploymentPlan solve_exact(const DeploymentProblem& problem);

/// Repeatedly adds the single model with the best objective improvement. When
/// no single model helps, an encoder/decoder pair for one KB is tried.
DeploymentPlan solve_greedy(const DeploymentProblem& problem);

/// Per-window re-solve.
std::vector<DeploymentPlan> solve_per_window(const std::vector<DeploymentProblem>& problems, bool exact);

/// (greedy - exact) / exact; 0 when both are zero.
double relative_gap(double greedyObjective, double exactObjective);

/// Returns a copy with capability entries incremented. Throws ValidationError
/// naming the node when an assignment targets a non-AI node or exceeds its slots.
SnapshotGraph apply_plan(const std::vector<Assignment>& assignments, const SnapshotGraph& snapshot);
std::vector<SnapshotGraph> apply_plan(const std::vector<Assignment>& assignments,
                                      const std::vector<SnapshotGraph>& snapshots);

/// Record format:
///   solver <exact|greedy>
///   objective <value>
///   gap <value>                                  (optional)
///   assign <node> <kb> <encoder|decoder>
///   app <id> <gsc|fallback|infeasible> <occupied_mbps> <delay_ms>
void write_deployment_plan(std::ostream& os, const DeploymentPlan& plan);
DeploymentPlan read_deployment_plan(std::istream& is);

}  // namespace gscsat
