#include "gscsat/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace gscsat {

namespace {

using nlohmann::json;

// Throws on keys outside `allowed`; `where` names the section in messages.
void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, std::string_view where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

Range get_range(const json& obj, std::string_view where, const char* key, Range fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string(where) + "." + key + ": expected [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Ratio json_ratio(const json& v, std::string_view where) {
  try {
    if (v.is_string()) return parse_ratio(v.get<std::string>());
    if (v.is_number_integer()) return make_ratio(v.get<std::int64_t>(), 1);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
  throw ConfigError(std::string(where) + ": ratio must be a string \"p/q\"");
}

std::string node_ref(const json& v, std::string_view where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ConfigError(std::string(where) + ": node reference must be a name or an id");
}

std::filesystem::path resolve(const std::filesystem::path& baseDir, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : baseDir / path;
}

AppSpec parse_app_json(const json& a, const std::string& where) {
  check_keys(a, where, {"id", "case", "src", "dst", "rateMbps", "kb", "ratio", "delayBoundMs"});
  AppSpec s;
  if (a.contains("id")) s.id = get<int>(a, where, "id", 0);
  s.caseType = get<int>(a, where, "case", 1);
  if (!a.contains("src") || !a.contains("dst")) throw ConfigError(where + ": src and dst are required");
  s.src = node_ref(a.at("src"), where + ".src");
  s.dst = node_ref(a.at("dst"), where + ".dst");
  s.rateMbps = get<double>(a, where, "rateMbps", 0.0);
  if (a.contains("kb")) s.kb = node_ref(a.at("kb"), where + ".kb");
  if (a.contains("ratio")) s.ratio = json_ratio(a.at("ratio"), where + ".ratio");
  if (a.contains("delayBoundMs")) s.delayBoundMs = get<double>(a, where, "delayBoundMs", 0.0);
  return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& baseDir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"seed", "constellation", "sites", "visibility", "discretization", "kbCatalog",
                              "compressionProfile", "routing", "workload", "deployment", "output"});
  RunConfig rc;
  ExperimentConfig& ex = rc.experiment;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    ex.seed = root["seed"].get<std::uint64_t>();
  }

  if (root.contains("constellation")) {
    const json& c = root["constellation"];
    check_keys(c, "constellation",
               {"planes", "satsPerPlane", "altitudeKm", "inclinationDeg", "phasing", "aiFraction"});
    auto& k = ex.constellation;
    k.planeCount = get<int>(c, "constellation", "planes", k.planeCount);
    k.satsPerPlane = get<int>(c, "constellation", "satsPerPlane", k.satsPerPlane);
    k.altitudeKm = get<double>(c, "constellation", "altitudeKm", k.altitudeKm);
    k.inclinationDeg = get<double>(c, "constellation", "inclinationDeg", k.inclinationDeg);
    k.phasingOffset = get<int>(c, "constellation", "phasing", k.phasingOffset);
    k.aiFraction = get<double>(c, "constellation", "aiFraction", k.aiFraction);
  }

  if (root.contains("sites")) {
    const json& s = root["sites"];
    if (s.is_string()) {
      const auto path = resolve(baseDir, s.get<std::string>());
      if (!std::filesystem::exists(path)) throw ConfigError("sites: file not found: " + path.string());
      try {
        ex.sites = load_sites_csv(path.string());
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("sites: ") + e.what());
      }
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string where = "sites[" + std::to_string(i) + "]";
        check_keys(s[i], where, {"name", "latitudeDeg", "longitudeDeg"});
        ex.sites.push_back({get<std::string>(s[i], where, "name", ""), get<double>(s[i], where, "latitudeDeg", 0.0),
                            get<double>(s[i], where, "longitudeDeg", 0.0)});
      }
    } else {
      throw ConfigError("sites: expected a CSV path or an array of sites");
    }
  }

  if (root.contains("visibility")) {
    const json& v = root["visibility"];
    check_keys(v, "visibility",
               {"elevationMaskDeg", "samplingStepS", "islRateMbps", "sglRateMbps", "delayMs"});
    auto& r = ex.visibility;
    r.elevationMaskDeg = get<double>(v, "visibility", "elevationMaskDeg", r.elevationMaskDeg);
    r.samplingStepS = get<double>(v, "visibility", "samplingStepS", r.samplingStepS);
    r.islRateMbps = get_range(v, "visibility", "islRateMbps", r.islRateMbps);
    r.sglRateMbps = get_range(v, "visibility", "sglRateMbps", r.sglRateMbps);
    r.delayMs = get_range(v, "visibility", "delayMs", r.delayMs);
  }

  if (root.contains("discretization")) {
    const json& d = root["discretization"];
    check_keys(d, "discretization", {"minServiceDurationS", "horizonS", "windowCount"});
    ex.discretization.minServiceDurationS =
        get<double>(d, "discretization", "minServiceDurationS", ex.discretization.minServiceDurationS);
    ex.horizonS = get<double>(d, "discretization", "horizonS", ex.horizonS);
    ex.windowCount = get<int>(d, "discretization", "windowCount", ex.windowCount);
  }

  rc.catalog = KnowledgeBaseCatalog::with_size(ex.kbCount);
  if (root.contains("kbCatalog")) {
    const json& k = root["kbCatalog"];
    check_keys(k, "kbCatalog", {"count", "labels"});
    if (k.contains("labels")) {
      auto labels = get<std::vector<std::string>>(k, "kbCatalog", "labels", {});
      if (k.contains("count") && k["count"] != labels.size()) {
        throw ConfigError("kbCatalog: count disagrees with labels");
      }
      rc.catalog = KnowledgeBaseCatalog(std::move(labels));
    } else {
      const int n = get<int>(k, "kbCatalog", "count", ex.kbCount);
      if (n < 1) throw ConfigError("kbCatalog.count must be >= 1");
      rc.catalog = KnowledgeBaseCatalog::with_size(n);
    }
    ex.kbCount = rc.catalog.size();
  }

  if (root.contains("compressionProfile")) {
    const json& p = root["compressionProfile"];
    check_keys(p, "compressionProfile", {"ratioChoices", "encodeLatencyMs", "decodeLatencyMs"});
    if (p.contains("ratioChoices")) {
      if (!p["ratioChoices"].is_array()) throw ConfigError("compressionProfile.ratioChoices: expected an array");
      ex.ratioChoices.clear();
      for (const auto& r : p["ratioChoices"]) ex.ratioChoices.push_back(json_ratio(r, "compressionProfile.ratioChoices"));
    }
    ex.encodeLatencyMs = get<double>(p, "compressionProfile", "encodeLatencyMs", ex.encodeLatencyMs);
    ex.decodeLatencyMs = get<double>(p, "compressionProfile", "decodeLatencyMs", ex.decodeLatencyMs);
  }

  if (root.contains("routing")) {
    const json& r = root["routing"];
    check_keys(r, "routing", {"objective", "labelBudget"});
    const auto obj = get<std::string>(r, "routing", "objective", "delay-first");
    if (obj == "delay-first") {
      ex.routing.objective = Objective::DelayFirst;
    } else if (obj == "bandwidth-first") {
      ex.routing.objective = Objective::BandwidthFirst;
    } else {
      throw ConfigError("routing.objective: expected delay-first or bandwidth-first");
    }
    ex.routing.labelBudget = get<std::size_t>(r, "routing", "labelBudget", ex.routing.labelBudget);
  }

  if (root.contains("workload")) {
    const json& w = root["workload"];
    check_keys(w, "workload", {"appCount", "rateRangeMbps", "caseProbabilities", "admission", "capacityScale"});
    ex.appCount = get<int>(w, "workload", "appCount", ex.appCount);
    ex.rateRangeMbps = get_range(w, "workload", "rateRangeMbps", ex.rateRangeMbps);
    if (w.contains("caseProbabilities")) {
      const auto p = get<std::vector<double>>(w, "workload", "caseProbabilities", {});
      if (p.size() != 4) throw ConfigError("workload.caseProbabilities: expected 4 entries");
      std::copy(p.begin(), p.end(), ex.caseProbabilities.begin());
    }
    if (w.contains("admission")) ex.admission = parse_admission_mode(get<std::string>(w, "workload", "admission", ""));
    ex.capacityScale = get<double>(w, "workload", "capacityScale", ex.capacityScale);
  }

  if (root.contains("deployment")) {
    const json& d = root["deployment"];
    check_keys(d, "deployment", {"solver", "penaltyHops", "weightBandwidth", "weightDelay", "enumerationLimit",
                                 "candidates", "applications", "planFile"});
    auto& dep = rc.deployment;
    dep.solver = get<std::string>(d, "deployment", "solver", dep.solver);
    if (dep.solver != "exact" && dep.solver != "greedy") throw ConfigError("deployment.solver: expected exact or greedy");
    dep.options.penaltyHops = get<double>(d, "deployment", "penaltyHops", dep.options.penaltyHops);
    dep.options.weightBandwidth = get<double>(d, "deployment", "weightBandwidth", dep.options.weightBandwidth);
    dep.options.weightDelay = get<double>(d, "deployment", "weightDelay", dep.options.weightDelay);
    dep.options.enumerationLimit = get<std::size_t>(d, "deployment", "enumerationLimit", dep.options.enumerationLimit);
    if (d.contains("candidates")) {
      if (!d["candidates"].is_array()) throw ConfigError("deployment.candidates: expected an array");
      for (const auto& c : d["candidates"]) dep.candidates.push_back(node_ref(c, "deployment.candidates"));
    }
    if (d.contains("applications")) {
      if (!d["applications"].is_array()) throw ConfigError("deployment.applications: expected an array");
      for (std::size_t i = 0; i < d["applications"].size(); ++i) {
        dep.applications.push_back(
            parse_app_json(d["applications"][i], "deployment.applications[" + std::to_string(i) + "]"));
      }
    }
    if (d.contains("planFile")) {
      const auto path = resolve(baseDir, get<std::string>(d, "deployment", "planFile", ""));
      if (!std::filesystem::exists(path)) throw ConfigError("deployment.planFile: file not found: " + path.string());
      dep.planFile = path;
    }
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"directory", "records"});
    if (o.contains("directory")) rc.outputDir = resolve(baseDir, get<std::string>(o, "output", "directory", ""));
    rc.writeRecords = get<bool>(o, "output", "records", rc.writeRecords);
  } else {
    rc.outputDir = baseDir / "out";
  }

  rc.deployment.options.routing = ex.routing;
  ex.keepRecords = rc.writeRecords;
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  RunConfig rc = parse_run_config(ss.str(), base);
  rc.source = path;
  return rc;
}

AppSpec parse_app_spec(std::string_view text) {
  AppSpec s;
  bool haveSrc = false;
  bool haveDst = false;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("application spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "case") {
        s.caseType = static_cast<int>(parse_integer(value));
      } else if (key == "src") {
        s.src = value;
        haveSrc = true;
      } else if (key == "dst") {
        s.dst = value;
        haveDst = true;
      } else if (key == "rate") {
        s.rateMbps = parse_number(value);
      } else if (key == "kb") {
        s.kb = value;
      } else if (key == "ratio") {
        s.ratio = parse_ratio(value);
      } else if (key == "id") {
        s.id = static_cast<int>(parse_integer(value));
      } else if (key == "bound") {
        s.delayBoundMs = parse_number(value);
      } else {
        throw ConfigError("application spec: unknown key '" + key + "'");
      }
    } catch (const ValidationError& e) {
      throw ConfigError("application spec: " + key + ": " + e.what());
    }
  }
  if (!haveSrc || !haveDst) throw ConfigError("application spec: src and dst are required");
  return s;
}

namespace {

NodeId resolve_node(const std::string& ref, const SnapshotGraph& snapshot) {
  if (const NodeSpec* n = snapshot.find_node_by_name(ref)) return n->id;
  try {
    const auto id = static_cast<NodeId>(parse_integer(ref));
    if (snapshot.find_node(id)) return id;
  } catch (const ValidationError&) {
  }
  throw ConfigError("node '" + ref + "' is not in the snapshot");
}

}  // namespace

Application resolve_app(const AppSpec& spec, int fallbackId, const SnapshotGraph& snapshot,
                        const KnowledgeBaseCatalog& catalog, Ratio defaultRatio) {
  if (spec.caseType < 1 || spec.caseType > 4) {
    throw ConfigError("case type must be 1..4, got " + std::to_string(spec.caseType));
  }
  Application a;
  a.id = spec.id.value_or(fallbackId);
  a.caseType = app_case_from_int(spec.caseType);
  a.src = resolve_node(spec.src, snapshot);
  a.dst = resolve_node(spec.dst, snapshot);
  a.rateMbps = spec.rateMbps;
  a.ratio = spec.ratio.value_or(defaultRatio);
  a.kb = -1;
  for (const auto& e : catalog.entries()) {
    if (e.label == spec.kb) a.kb = e.id;
  }
  if (a.kb < 0) {
    try {
      a.kb = static_cast<KbId>(parse_integer(spec.kb));
    } catch (const ValidationError&) {
      throw ConfigError("unknown knowledge base '" + spec.kb + "'");
    }
  }
  try {
    validate_application(a, snapshot.kb_count());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return a;
}

}  // namespace gscsat
