#include "gscsat/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "gscsat/rng.hpp"

namespace gscsat {

void ExperimentConfig::validate() const {
  constellation.validate();
  for (const auto& s : sites) validate_site(s);
  if (!(horizonS > 0.0)) throw ConfigError("horizon must be positive");
  if (!(discretization.minServiceDurationS >= 0.0)) throw ConfigError("minimum service duration must be >= 0");
  if (windowCount < 1) throw ConfigError("windowCount must be >= 1");
  if (kbCount < 1) throw ConfigError("kbCount must be >= 1");
  if (ratioChoices.empty()) throw ConfigError("ratioChoices must not be empty");
  for (const Ratio& r : ratioChoices) {
    if (r.num <= 0 || r.den <= 0 || r.num > r.den) throw ConfigError("ratioChoices must lie in (0, 1]");
  }
  if (appCount < 0) throw ConfigError("appCount must be >= 0");
  if (!(rateRangeMbps.lo > 0.0) || !(rateRangeMbps.hi >= rateRangeMbps.lo)) {
    throw ConfigError("rate range must satisfy 0 < lo <= hi");
  }
  double sum = 0.0;
  for (double p : caseProbabilities) {
    if (!(p >= 0.0)) throw ConfigError("case probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("case probabilities must sum to 1");
  if (!(encodeLatencyMs >= 0.0) || !(decodeLatencyMs >= 0.0)) throw ConfigError("model latencies must be >= 0");
  if (!(capacityScale > 0.0)) throw ConfigError("capacityScale must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  auto checkRange = [](Range r, const char* what) {
    if (!(r.lo >= 0.0) || !(r.hi >= r.lo)) throw ConfigError(std::string(what) + " range must satisfy 0 <= lo <= hi");
  };
  checkRange(visibility.islRateMbps, "ISL rate");
  checkRange(visibility.sglRateMbps, "SGL rate");
  checkRange(visibility.delayMs, "delay");
  if (!(visibility.samplingStepS > 0.0)) throw ConfigError("sampling step must be positive");
}

std::string_view to_string(AdmissionMode m) {
  return m == AdmissionMode::Sequential ? "sequential" : "independent";
}

AdmissionMode parse_admission_mode(std::string_view text) {
  if (text == "sequential") return AdmissionMode::Sequential;
  if (text == "independent") return AdmissionMode::Independent;
  throw ConfigError("unknown admission mode '" + std::string(text) + "'");
}

std::string_view to_string(Method m) { return m == Method::Traditional ? "traditional" : "gsc"; }

std::vector<Application> generate_workload(const ExperimentConfig& cfg) {
  if (cfg.sites.size() < 2) throw ConfigError("workload needs at least 2 sites");
  const int satCount = cfg.constellation.satellite_count();
  const auto siteCount = static_cast<std::uint64_t>(cfg.sites.size());
  Rng rng(substream_seed(cfg.seed, "workload"));
  std::vector<Application> apps;
  apps.reserve(static_cast<std::size_t>(std::max(cfg.appCount, 0)));
  for (int i = 0; i < cfg.appCount; ++i) {
    Application a;
    a.id = i;
    const auto s = rng.index(siteCount);
    auto d = rng.index(siteCount - 1);
    if (d >= s) ++d;
    a.src = satCount + static_cast<NodeId>(s);
    a.dst = satCount + static_cast<NodeId>(d);
    a.rateMbps = rng.uniform(cfg.rateRangeMbps.lo, cfg.rateRangeMbps.hi);
    const double u = rng.uniform01();
    int type = 4;
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      acc += cfg.caseProbabilities[k];
      if (u < acc) {
        type = k + 1;
        break;
      }
    }
    // Rounding can leave the cumulative sum just under 1; take the last non-zero type.
    if (u >= acc) {
      for (int k = 3; k >= 0; --k) {
        if (cfg.caseProbabilities[k] > 0.0) {
          type = k + 1;
          break;
        }
      }
    }
    a.caseType = app_case_from_int(type);
    a.kb = static_cast<KbId>(rng.index(static_cast<std::uint64_t>(cfg.kbCount)));
    a.ratio = cfg.ratioChoices[rng.index(cfg.ratioChoices.size())];
    apps.push_back(a);
  }
  return apps;
}

namespace {

// Raw sums for one window; reduced in window order so any thread count gives
// the same bits.
struct CellSums {
  double occupied = 0.0;
  double delay = 0.0;
  long routed = 0;
  long blocked = 0;
  long fallback = 0;
};

struct WindowResult {
  std::array<std::array<CellSums, 2>, 4> cells{};
  std::vector<RouteRecord> traditional;
  std::vector<RouteRecord> gsc;
};

struct Outcome {
  std::optional<RoutePlan> plan;
  bool admitted = false;
};

Outcome route_and_admit(const Application& app, SnapshotGraph& snapshot, const CompressionProfile& profile,
                        const RoutingOptions& opts, Method method, bool reserve) {
  Outcome out;
  RouteResult r = method == Method::Traditional ? route_traditional(app, snapshot, opts)
                                                : route(app, snapshot, profile, opts);
  if (method == Method::Gsc && std::holds_alternative<Unroutable>(r) && app.caseType != AppCase::TerminalsBoth) {
    r = route_traditional(app, snapshot, opts);
    if (auto* p = std::get_if<RoutePlan>(&r)) p->fallback = true;
  }
  if (auto* p = std::get_if<RoutePlan>(&r)) {
    // Routing only uses links whose residual covers the stage rate, so an
    // unreserved plan always fits.
    out.admitted = reserve ? admit(*p, snapshot) : true;
    out.plan = std::move(*p);
  }
  return out;
}

WindowResult simulate_window(const ExperimentConfig& cfg, const SnapshotGraph& base,
                             const std::vector<Application>& apps, const CompressionProfile& profile) {
  WindowResult res;
  for (Method m : {Method::Traditional, Method::Gsc}) {
    SnapshotGraph g = base;
    for (const Application& app : apps) {
      Outcome o = route_and_admit(app, g, profile, cfg.routing, m, cfg.admission == AdmissionMode::Sequential);
      CellSums& c = res.cells[static_cast<int>(app.caseType) - 1][static_cast<int>(m)];
      if (o.admitted) {
        c.occupied += o.plan->occupiedBandwidthMbps;
        c.delay += o.plan->endToEndDelayMs;
        ++c.routed;
        if (o.plan->fallback) ++c.fallback;
      } else {
        ++c.blocked;
      }
      if (cfg.keepRecords && o.plan) {
        auto& out = m == Method::Traditional ? res.traditional : res.gsc;
        out.push_back(make_record(*o.plan, base.window().index, o.admitted));
      }
    }
  }
  return res;
}

}  // namespace

std::vector<NodeSpec> scenario_nodes(const ExperimentConfig& cfg) {
  const KnowledgeBaseCatalog catalog = KnowledgeBaseCatalog::with_size(cfg.kbCount);
  std::vector<NodeSpec> nodes = assign_ai_capabilities(build_nodes(cfg.constellation, cfg.sites, cfg.kbCount),
                                                       catalog, cfg.constellation.aiFraction, cfg.seed);
  if (cfg.deployment.empty()) return nodes;
  const SnapshotGraph bare(TimeWindow{0, 0.0, cfg.horizonS}, cfg.kbCount, std::move(nodes), {});
  return apply_plan(cfg.deployment, bare).nodes();
}

ContactPlan scenario_contacts(const ExperimentConfig& cfg) {
  ContactPlan plan =
      compute_contacts(cfg.constellation, cfg.sites, Horizon{0.0, cfg.horizonS}, cfg.visibility, cfg.seed);
  if (cfg.capacityScale != 1.0) {
    for (Contact& c : plan.contacts) c.rateMbps *= cfg.capacityScale;
  }
  return plan;
}

std::vector<TimeWindow> scenario_windows(const ExperimentConfig& cfg, const ContactPlan& contacts) {
  std::vector<TimeWindow> all = merge_windows(sort_timestamps(contacts), cfg.discretization);
  if (all.size() > static_cast<std::size_t>(cfg.windowCount)) all.resize(static_cast<std::size_t>(cfg.windowCount));
  return all;
}

ExperimentRun run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentRun run;
  run.apps = generate_workload(cfg);

  run.contacts = scenario_contacts(cfg);
  run.windows = scenario_windows(cfg, run.contacts);
  const std::vector<NodeSpec> nodes = scenario_nodes(cfg);
  const CompressionProfile profile =
      CompressionProfile::uniform(cfg.kbCount, Ratio{1, 1}, cfg.encodeLatencyMs, cfg.decodeLatencyMs);

  std::vector<WindowResult> results(run.windows.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t w = next.fetch_add(1);
      if (w >= run.windows.size() || failed.load()) return;
      try {
        SnapshotGraph snap = build_snapshot(run.contacts, run.windows[w], nodes, cfg.kbCount);
        results[w] = simulate_window(cfg, snap, run.apps, profile);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int threadCount = std::max(1, std::min<int>(cfg.threads, static_cast<int>(run.windows.size())));
  if (threadCount == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threadCount; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::array<std::array<CellSums, 2>, 4> total{};
  for (WindowResult& r : results) {
    for (int k = 0; k < 4; ++k) {
      for (int m = 0; m < 2; ++m) {
        total[k][m].occupied += r.cells[k][m].occupied;
        total[k][m].delay += r.cells[k][m].delay;
        total[k][m].routed += r.cells[k][m].routed;
        total[k][m].blocked += r.cells[k][m].blocked;
        total[k][m].fallback += r.cells[k][m].fallback;
      }
    }
    if (cfg.keepRecords) {
      run.traditionalRecords.insert(run.traditionalRecords.end(), r.traditional.begin(), r.traditional.end());
      run.gscRecords.insert(run.gscRecords.end(), r.gsc.begin(), r.gsc.end());
    }
  }

  MetricsReport& rep = run.report;
  rep.windowCount = static_cast<int>(run.windows.size());
  rep.appCount = cfg.appCount;
  long routedAny = 0;
  for (int k = 0; k < 4; ++k) {
    for (int m = 0; m < 2; ++m) {
      const CellSums& s = total[k][m];
      CaseMetrics& c = rep.cells[k][m];
      c.routed = s.routed;
      c.blocked = s.blocked;
      c.fallback = s.fallback;
      if (s.routed > 0) {
        c.meanOccupiedMbps = s.occupied / static_cast<double>(s.routed);
        c.meanDelayMs = s.delay / static_cast<double>(s.routed);
      }
      routedAny += s.routed;
    }
  }
  rep.overallReduction = overall_reduction(rep);
  if (routedAny == 0) rep.diagnostics.push_back("no application was routable in any window");
  if (run.windows.size() < static_cast<std::size_t>(cfg.windowCount)) {
    rep.diagnostics.push_back("only " + std::to_string(run.windows.size()) + " of " +
                              std::to_string(cfg.windowCount) + " requested windows fit the horizon");
  }
  return run;
}

MetricsReport run_experiment(const ExperimentConfig& cfg) { return run_simulation(cfg).report; }

double overall_reduction(const MetricsReport& report) {
  double occ[2] = {0.0, 0.0};
  long n[2] = {0, 0};
  for (int k = 0; k < 4; ++k) {
    for (int m = 0; m < 2; ++m) {
      occ[m] += report.cells[k][m].meanOccupiedMbps * static_cast<double>(report.cells[k][m].routed);
      n[m] += report.cells[k][m].routed;
    }
  }
  if (n[0] == 0 || n[1] == 0 || occ[0] <= 0.0) return 0.0;
  return 1.0 - (occ[1] / static_cast<double>(n[1])) / (occ[0] / static_cast<double>(n[0]));
}

MetricsReport pool_reports(const std::vector<MetricsReport>& reports) {
  MetricsReport out;
  std::array<std::array<CellSums, 2>, 4> total{};
  for (const MetricsReport& r : reports) {
    out.windowCount += r.windowCount;
    out.appCount = std::max(out.appCount, r.appCount);
    for (int k = 0; k < 4; ++k) {
      for (int m = 0; m < 2; ++m) {
        const CaseMetrics& c = r.cells[k][m];
        total[k][m].occupied += c.meanOccupiedMbps * static_cast<double>(c.routed);
        total[k][m].delay += c.meanDelayMs * static_cast<double>(c.routed);
        total[k][m].routed += c.routed;
        total[k][m].blocked += c.blocked;
        total[k][m].fallback += c.fallback;
      }
    }
    out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
  }
  for (int k = 0; k < 4; ++k) {
    for (int m = 0; m < 2; ++m) {
      const CellSums& s = total[k][m];
      CaseMetrics& c = out.cells[k][m];
      c.routed = s.routed;
      c.blocked = s.blocked;
      c.fallback = s.fallback;
      if (s.routed > 0) {
        c.meanOccupiedMbps = s.occupied / static_cast<double>(s.routed);
        c.meanDelayMs = s.delay / static_cast<double>(s.routed);
      }
    }
  }
  out.overallReduction = overall_reduction(out);
  return out;
}

MethodComparison compare_methods(const MetricsReport& report) {
  MethodComparison cmp;
  for (int k = 1; k <= 4; ++k) {
    const CaseMetrics& t = report.at(k, Method::Traditional);
    const CaseMetrics& g = report.at(k, Method::Gsc);
    if (t.routed == 0 || g.routed == 0 || !(t.meanOccupiedMbps > 0.0)) {
      throw ValidationError("report has no routed applications of type " + std::to_string(k));
    }
    cmp.reduction[k - 1] = 1.0 - g.meanOccupiedMbps / t.meanOccupiedMbps;
  }
  const auto& r = cmp.reduction;
  cmp.type1Largest = r[0] > r[1] && r[0] > r[2] && r[0] > r[3];
  cmp.type4Smallest = r[3] < r[0] && r[3] < r[1] && r[3] < r[2];
  return cmp;
}

namespace {

constexpr std::string_view kMetricsHeader = "case_type,method,mean_occupied_mbps,mean_delay_ms,routed,blocked";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const MetricsReport& report) {
  os << kMetricsHeader << '\n';
  for (int k = 1; k <= 4; ++k) {
    for (Method m : {Method::Traditional, Method::Gsc}) {
      const CaseMetrics& c = report.at(k, m);
      os << k << ',' << to_string(m) << ',' << format_number(c.meanOccupiedMbps) << ','
         << format_number(c.meanDelayMs) << ',' << c.routed << ',' << c.blocked << '\n';
    }
  }
}

MetricsReport read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("metrics CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader) throw ValidationError("metrics CSV header mismatch: '" + line + "'");
  MetricsReport rep;
  bool seen[4][2] = {};
  int lineNo = 1;
  while (std::getline(is, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    const std::string where = "metrics CSV line " + std::to_string(lineNo);
    if (f.size() != 6) throw ValidationError(where + ": expected 6 fields");
    const auto type = parse_integer(f[0]);
    if (type < 1 || type > 4) throw ValidationError(where + ": case_type must be 1..4");
    Method m;
    if (f[1] == "traditional") {
      m = Method::Traditional;
    } else if (f[1] == "gsc") {
      m = Method::Gsc;
    } else {
      throw ValidationError(where + ": unknown method '" + f[1] + "'");
    }
    auto& flag = seen[type - 1][static_cast<int>(m)];
    if (flag) throw ValidationError(where + ": duplicate row");
    flag = true;
    CaseMetrics& c = rep.at(static_cast<int>(type), m);
    c.meanOccupiedMbps = parse_number(f[2]);
    c.meanDelayMs = parse_number(f[3]);
    c.routed = static_cast<long>(parse_integer(f[4]));
    c.blocked = static_cast<long>(parse_integer(f[5]));
    if (c.routed < 0 || c.blocked < 0) throw ValidationError(where + ": counts must be >= 0");
  }
  for (auto& row : seen) {
    for (bool b : row) {
      if (!b) throw ValidationError("metrics CSV must have 8 rows (4 case types x 2 methods)");
    }
  }
  rep.overallReduction = overall_reduction(rep);
  return rep;
}

void write_summary(std::ostream& os, const MetricsReport& report) {
  os << "windows: " << report.windowCount << '\n';
  os << "applications: " << report.appCount << '\n';
  os << "overall_bandwidth_reduction: " << format_number(report.overallReduction) << '\n';
  for (int k = 1; k <= 4; ++k) {
    const CaseMetrics& t = report.at(k, Method::Traditional);
    const CaseMetrics& g = report.at(k, Method::Gsc);
    const double red = t.meanOccupiedMbps > 0.0 ? 1.0 - g.meanOccupiedMbps / t.meanOccupiedMbps : 0.0;
    os << "type" << k << "_bandwidth_reduction: " << format_number(red) << '\n';
    os << "type" << k << "_delay_difference_ms: " << format_number(g.meanDelayMs - t.meanDelayMs) << '\n';
    os << "type" << k << "_gsc_fallback: " << g.fallback << '\n';
  }
  for (const auto& d : report.diagnostics) os << "diagnostic: " << d << '\n';
}

}  // namespace gscsat
