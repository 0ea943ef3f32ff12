#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gscsat/deployment.hpp"
#include "gscsat/geometry.hpp"
#include "gscsat/routing.hpp"
#include "gscsat/temporal_graph.hpp"

namespace gscsat {

/// Sequential: applications drain a shared residual in ascending id order.
/// Independent: every application is checked against the full link rates.
enum class AdmissionMode { Sequential, Independent };

std::string_view to_string(AdmissionMode m);
AdmissionMode parse_admission_mode(std::string_view text);

struct ExperimentConfig {
  std::uint64_t seed = 1;
  ConstellationSpec constellation{50, 50, 550.0, 53.0, 1, 0.2};
  std::vector<GroundSite> sites;
  VisibilityRules visibility;
  double horizonS = 3600.0;
  DiscretizationConfig discretization{60.0};
  int windowCount = 60;
  int kbCount = 3;
  std::vector<Ratio> ratioChoices{{1, 8}, {1, 4}, {1, 2}};
  int appCount = 200;
  Range rateRangeMbps{5.0, 100.0};
  std::array<double, 4> caseProbabilities{0.25, 0.25, 0.25, 0.25};
  double encodeLatencyMs = 0.0;
  double decodeLatencyMs = 0.0;
  RoutingOptions routing;
  /// Multiplies every contact rate; 1 reproduces the configured ranges.
  double capacityScale = 1.0;
  AdmissionMode admission = AdmissionMode::Sequential;
  /// Extra models installed on every window's AI satellites.
  std::vector<Assignment> deployment;
  int threads = 1;
  bool keepRecords = false;

  void validate() const;
};

enum class Method { Traditional = 0, Gsc = 1 };

std::string_view to_string(Method m);

struct CaseMetrics {
  double meanOccupiedMbps = 0.0;
  double meanDelayMs = 0.0;
  long routed = 0;
  long blocked = 0;
  /// GSC only: routed on the raw traditional path for lack of a matching satellite.
  long fallback = 0;
};

struct MetricsReport {
  /// cells[caseType - 1][method]
  std::array<std::array<CaseMetrics, 2>, 4> cells{};
  double overallReduction = 0.0;
  int windowCount = 0;
  int appCount = 0;
  std::vector<std::string> diagnostics;

  const CaseMetrics& at(int caseType, Method m) const { return cells.at(caseType - 1)[static_cast<int>(m)]; }
  CaseMetrics& at(int caseType, Method m) { return cells.at(caseType - 1)[static_cast<int>(m)]; }
};

/// Applications with ids 0..appCount-1; terminals are node ids
/// satelliteCount + siteIndex.
std::vector<Application> generate_workload(const ExperimentConfig& cfg);

struct ExperimentRun {
  ContactPlan contacts;
  std::vector<TimeWindow> windows;  // windows actually simulated
  std::vector<Application> apps;
  MetricsReport report;
  std::vector<RouteRecord> traditionalRecords;  // filled when keepRecords
  std::vector<RouteRecord> gscRecords;
};

/// Satellites and terminals with AI capabilities drawn and `deployment` applied.
std::vector<NodeSpec> scenario_nodes(const ExperimentConfig& cfg);
ContactPlan scenario_contacts(const ExperimentConfig& cfg);
/// The first min(windowCount, available) windows of the contact plan.
std::vector<TimeWindow> scenario_windows(const ExperimentConfig& cfg, const ContactPlan& contacts);

ExperimentRun run_simulation(const ExperimentConfig& cfg);
MetricsReport run_experiment(const ExperimentConfig& cfg);

/// 1 - (GSC occupied bandwidth) / (traditional occupied bandwidth), each
/// averaged over every admitted (app, window) pair regardless of case.
double overall_reduction(const MetricsReport& report);

/// Pools per-seed reports: means weighted by routed counts, counts summed.
MetricsReport pool_reports(const std::vector<MetricsReport>& reports);

/// 1 - mean_gsc / mean_traditional for each case type.
struct MethodComparison {
  std::array<double, 4> reduction{};
  bool type1Largest = false;   // strictly larger than every other type
  bool type4Smallest = false;  // strictly smaller than every other type
};

MethodComparison compare_methods(const MetricsReport& report);

/// Header: case_type,method,mean_occupied_mbps,mean_delay_ms,routed,blocked
void write_metrics_csv(std::ostream& os, const MetricsReport& report);
MetricsReport read_metrics_csv(std::istream& is);
/// key: value lines.
void write_summary(std::ostream& os, const MetricsReport& report);

}  // namespace gscsat
