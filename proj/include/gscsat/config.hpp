#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gscsat/deployment.hpp"
#include "gscsat/scenario.hpp"

namespace gscsat {

/// Application as written in a configuration file; endpoints may be node ids
/// or node names and are resolved against a snapshot.
struct AppSpec {
  std::optional<int> id;
  int caseType = 1;
  std::string src;
  std::string dst;
  double rateMbps = 0.0;
  std::string kb = "0";
  std::optional<Ratio> ratio;
  std::optional<double> delayBoundMs;
};

struct DeploymentSection {
  std::string solver = "greedy";
  DeploymentOptions options;
  std::vector<std::string> candidates;  // empty: every AI satellite in the snapshot
  std::vector<AppSpec> applications;
  /// Plan applied to every window snapshot by `simulate` and to the snapshot used by `route`.
  std::optional<std::filesystem::path> planFile;
};

struct RunConfig {
  ExperimentConfig experiment;
  KnowledgeBaseCatalog catalog;
  DeploymentSection deployment;
  std::filesystem::path outputDir = "out";
  bool writeRecords = true;
  std::filesystem::path source;  // file the configuration was read from
};

/// Parses a JSON configuration. Relative paths resolve against `baseDir`.
/// Unknown keys and unresolvable paths raise ConfigError.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& baseDir);
RunConfig load_run_config(const std::filesystem::path& path);

/// "case=3,src=U1,dst=U2,rate=20,kb=0,ratio=1/4[,id=7][,bound=40]"
AppSpec parse_app_spec(std::string_view text);

/// Resolves names against the snapshot and the catalog. `defaultRatio` fills a missing ratio.
Application resolve_app(const AppSpec& spec, int fallbackId, const SnapshotGraph& snapshot,
                        const KnowledgeBaseCatalog& catalog, Ratio defaultRatio);

}  // namespace gscsat
