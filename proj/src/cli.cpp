#include "gscsat/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gscsat/config.hpp"
#include "gscsat/deployment.hpp"
#include "gscsat/routing.hpp"
#include "gscsat/scenario.hpp"

namespace gscsat {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> solver;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::string snapshot;
  std::optional<int> window;
  std::string app;
  std::string plan;
  std::string metrics;
  bool traditional = false;
};

template <typename F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

std::vector<Assignment> read_plan_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file: " + path.string());
  try {
    return read_deployment_plan(in).assignments;
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SnapshotGraph read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file: " + path.string());
  try {
    return read_snapshot(in);
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig load_with_overrides(const Options& o) {
  RunConfig rc = load_run_config(o.config);
  if (o.seed) rc.experiment.seed = *o.seed;
  if (o.solver) rc.deployment.solver = *o.solver;
  if (o.threads) {
    if (*o.threads < 1) throw ConfigError("--threads must be >= 1");
    rc.experiment.threads = *o.threads;
  }
  if (o.out) rc.outputDir = *o.out;
  if (!o.plan.empty()) rc.deployment.planFile = o.plan;
  if (rc.deployment.planFile) rc.experiment.deployment = read_plan_file(*rc.deployment.planFile);
  return rc;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  RunConfig rc = load_with_overrides(o);
  rc.experiment.validate();
  const ExperimentRun run = run_simulation(rc.experiment);
  const auto& dir = rc.outputDir;
  write_file_atomic(dir / "contacts.txt", render([&](std::ostream& os) { write_contact_plan(os, run.contacts); }));
  write_file_atomic(dir / "windows.txt", render([&](std::ostream& os) { write_windows(os, run.windows); }));
  write_file_atomic(dir / "metrics.csv", render([&](std::ostream& os) { write_metrics_csv(os, run.report); }));
  write_file_atomic(dir / "summary.txt", render([&](std::ostream& os) { write_summary(os, run.report); }));
  if (rc.writeRecords) {
    write_file_atomic(dir / "routes_traditional.txt",
                      render([&](std::ostream& os) { write_route_records(os, run.traditionalRecords); }));
    write_file_atomic(dir / "routes_gsc.txt",
                      render([&](std::ostream& os) { write_route_records(os, run.gscRecords); }));
  }
  write_summary(out, run.report);
  out << "output: " << dir.string() << '\n';
  long routed = 0;
  for (const auto& row : run.report.cells) {
    for (const auto& c : row) routed += c.routed;
  }
  return routed == 0 && rc.experiment.appCount > 0 ? kExitFailure : kExitOk;
}

std::vector<NodeId> resolve_candidates(const RunConfig& rc, const SnapshotGraph& snap) {
  std::vector<NodeId> ids;
  if (rc.deployment.candidates.empty()) {
    for (const auto& n : snap.nodes()) {
      if (n.kind == NodeKind::AISat) ids.push_back(n.id);
    }
    return ids;
  }
  for (const auto& ref : rc.deployment.candidates) {
    const NodeSpec* n = snap.find_node_by_name(ref);
    if (!n) {
      try {
        n = snap.find_node(static_cast<NodeId>(parse_integer(ref)));
      } catch (const ValidationError&) {
      }
    }
    if (!n) throw ConfigError("deployment candidate '" + ref + "' is not in the snapshot");
    ids.push_back(n->id);
  }
  return ids;
}

DeploymentProblem make_problem(const RunConfig& rc, SnapshotGraph snap) {
  DeploymentProblem p{std::move(snap), {}, {}, {}, {}, rc.deployment.options};
  p.candidates = resolve_candidates(rc, p.snapshot);
  const Ratio defaultRatio = rc.experiment.ratioChoices.front();
  bool anyBound = false;
  for (std::size_t i = 0; i < rc.deployment.applications.size(); ++i) {
    const AppSpec& spec = rc.deployment.applications[i];
    p.apps.push_back(resolve_app(spec, static_cast<int>(i), p.snapshot, rc.catalog, defaultRatio));
    anyBound = anyBound || spec.delayBoundMs.has_value();
  }
  if (anyBound) {
    for (const auto& spec : rc.deployment.applications) {
      p.delayBoundMs.push_back(spec.delayBoundMs.value_or(std::numeric_limits<double>::infinity()));
    }
  }
  p.profile = CompressionProfile::uniform(p.snapshot.kb_count(), Ratio{1, 1}, rc.experiment.encodeLatencyMs,
                                          rc.experiment.decodeLatencyMs);
  try {
    validate_problem(p);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig rc = load_with_overrides(o);
  SnapshotGraph snap = read_snapshot_file(o.snapshot);
  const DeploymentProblem problem = make_problem(rc, std::move(snap));
  DeploymentPlan plan;
  if (rc.deployment.solver == "exact") {
    plan = solve_exact(problem);
  } else {
    plan = solve_greedy(problem);
    try {
      plan.gap = relative_gap(plan.objectiveValue, solve_exact(problem).objectiveValue);
    } catch (const std::runtime_error& e) {
      err << "note: gap not computed: " << e.what() << '\n';
    }
  }
  const std::string text = render([&](std::ostream& os) { write_deployment_plan(os, plan); });
  write_file_atomic(rc.outputDir / "plan.txt", text);
  out << text;
  return kExitOk;
}

int cmd_route(const Options& o, std::ostream& out) {
  const RunConfig rc = load_with_overrides(o);
  SnapshotGraph snap;
  if (!o.snapshot.empty()) {
    snap = read_snapshot_file(o.snapshot);
    if (!rc.experiment.deployment.empty()) snap = apply_plan(rc.experiment.deployment, snap);
  } else {
    rc.experiment.validate();
    const ContactPlan contacts = scenario_contacts(rc.experiment);
    const auto windows = scenario_windows(rc.experiment, contacts);
    const int w = o.window.value_or(0);
    if (w < 0 || w >= static_cast<int>(windows.size())) {
      throw ConfigError("window " + std::to_string(w) + " out of range (" + std::to_string(windows.size()) +
                        " windows)");
    }
    snap = build_snapshot(contacts, windows[w], scenario_nodes(rc.experiment), rc.experiment.kbCount);
  }
  const Application app =
      resolve_app(parse_app_spec(o.app), 0, snap, rc.catalog, rc.experiment.ratioChoices.front());
  const CompressionProfile profile = CompressionProfile::uniform(snap.kb_count(), Ratio{1, 1},
                                                                 rc.experiment.encodeLatencyMs,
                                                                 rc.experiment.decodeLatencyMs);
  const RouteResult r = o.traditional ? route_traditional(app, snap, rc.experiment.routing)
                                      : route(app, snap, profile, rc.experiment.routing);
  if (const auto* u = std::get_if<Unroutable>(&r)) {
    out << "unroutable: " << to_string(u->reason) << '\n';
    return kExitFailure;
  }
  const RoutePlan& plan = std::get<RoutePlan>(r);
  out << describe(plan, snap);
  out << "record: ";
  write_route_records(out, {make_record(plan, snap.window().index, true)});
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  std::filesystem::path path = o.metrics;
  if (path.empty()) {
    if (o.out) {
      path = std::filesystem::path(*o.out) / "metrics.csv";
    } else if (!o.config.empty()) {
      path = load_run_config(o.config).outputDir / "metrics.csv";
    } else {
      throw ConfigError("report needs --metrics, --out or --config");
    }
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metrics file: " + path.string());
  MetricsReport rep;
  try {
    rep = read_metrics_csv(in);
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  out << "overall_bandwidth_reduction: " << format_number(rep.overallReduction) << '\n';
  try {
    const MethodComparison cmp = compare_methods(rep);
    for (int k = 0; k < 4; ++k) {
      out << "type" << k + 1 << "_bandwidth_reduction: " << format_number(cmp.reduction[k]) << '\n';
    }
    out << "type1_largest_reduction: " << (cmp.type1Largest ? "true" : "false") << '\n';
    out << "type4_smallest_reduction: " << (cmp.type4Smallest ? "true" : "false") << '\n';
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  for (int k = 1; k <= 4; ++k) {
    out << "type" << k << "_delay_difference_ms: "
        << format_number(rep.at(k, Method::Gsc).meanDelayMs - rep.at(k, Method::Traditional).meanDelayMs) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satellite network simulator with semantic-communication routing and model deployment", "gscsat"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needConfig) {
    auto* c = sub->add_option("--config", o.config, "JSON run configuration");
    if (needConfig) c->required();
    sub->add_option("--seed", o.seed, "Override the configured seed");
    sub->add_option("--solver", o.solver, "Deployment solver")->check(CLI::IsMember({"exact", "greedy"}));
    sub->add_option("--threads", o.threads, "Worker threads");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* sim = app.add_subcommand("simulate", "Run the traditional-vs-GSC experiment and write all outputs");
  common(sim, true);
  sim->add_option("--plan", o.plan, "Deployment plan installed on every window");

  auto* plan = app.add_subcommand("plan", "Solve model deployment for one snapshot");
  common(plan, true);
  plan->add_option("--snapshot", o.snapshot, "Snapshot record file")->required();

  auto* rt = app.add_subcommand("route", "Route a single application and print the plan");
  common(rt, true);
  rt->add_option("--snapshot", o.snapshot, "Snapshot record file (default: build from the configuration)");
  rt->add_option("--window", o.window, "Window index when building from the configuration");
  rt->add_option("--app", o.app, "case=N,src=X,dst=Y,rate=R[,kb=K][,ratio=p/q][,id=I]")->required();
  rt->add_option("--plan", o.plan, "Deployment plan applied to the snapshot");
  rt->add_flag("--traditional", o.traditional, "Raw-rate shortest-delay baseline");

  auto* rep = app.add_subcommand("report", "Summarize a metrics CSV");
  common(rep, false);
  rep->add_option("--metrics", o.metrics, "Metrics CSV (default: <out>/metrics.csv)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(o, out);
    if (*plan) return cmd_plan(o, out, err);
    if (*rt) return cmd_route(o, out);
    if (*rep) return cmd_report(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gscsat
