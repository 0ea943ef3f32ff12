#include "gscsat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "gscsat/rng.hpp"

namespace gscsat {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_range(const Range& r, const char* what, bool positive) {
  if (!(r.lo <= r.hi) || (positive ? r.lo <= 0.0 : r.lo < 0.0)) {
    throw ConfigError(std::string("invalid ") + what + " range");
  }
}

Contact draw_contact(NodeId a, NodeId b, double start, double end, LinkKind kind,
                     const VisibilityRules& rules, std::uint64_t contactSeed) {
  if (a > b) std::swap(a, b);
  // Keyed by the canonical pair and start tick so the draw does not depend on
  // evaluation order.
  const auto tick = static_cast<std::uint64_t>(std::llround(start * 1000.0));
  std::uint64_t h = mix64(contactSeed ^ mix64(static_cast<std::uint64_t>(a)));
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(b) + 0x51ed27ULL));
  h = mix64(h ^ tick);
  const Range rate = kind == LinkKind::ISL ? rules.islRateMbps : rules.sglRateMbps;
  Contact c;
  c.nodeA = a;
  c.nodeB = b;
  c.startTime = start;
  c.endTime = end;
  c.rateMbps = rate.lo + (rate.hi - rate.lo) * unit_from_bits(h);
  c.propagationDelayMs = rules.delayMs.lo + (rules.delayMs.hi - rules.delayMs.lo) * unit_from_bits(mix64(h));
  c.linkKind = kind;
  return c;
}

bool contact_less(const Contact& l, const Contact& r) {
  if (l.startTime != r.startTime) return l.startTime < r.startTime;
  if (l.nodeA != r.nodeA) return l.nodeA < r.nodeA;
  if (l.nodeB != r.nodeB) return l.nodeB < r.nodeB;
  return l.endTime < r.endTime;
}

}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double ConstellationSpec::orbital_period_s() const {
  const double a = orbital_radius_km();
  return kTwoPi * std::sqrt(a * a * a / kEarthMuKm3PerS2);
}

void ConstellationSpec::validate() const {
  if (planeCount <= 0 || satsPerPlane <= 0) {
    throw ConfigError("constellation needs at least one plane and one satellite per plane");
  }
  if (!(altitudeKm > 0.0)) throw ConfigError("constellation altitude must be positive");
  if (!(aiFraction >= 0.0 && aiFraction <= 1.0)) throw ConfigError("aiFraction must lie in [0, 1]");
  if (phasingOffset < 0 || phasingOffset >= std::max(planeCount, 1)) {
    throw ConfigError("phasing offset must lie in [0, planeCount)");
  }
}

void validate_site(const GroundSite& site) {
  if (!(site.latitudeDeg >= -90.0 && site.latitudeDeg <= 90.0) ||
      !(site.longitudeDeg >= -180.0 && site.longitudeDeg <= 180.0)) {
    throw ConfigError("site '" + site.name + "' has out-of-range coordinates");
  }
}

std::vector<GroundSite> load_sites_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sites file: " + path);
  std::vector<GroundSite> sites;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 3) throw ConfigError("sites file: expected 3 columns: " + line);
    if (cols[0] == "name") continue;
    GroundSite s;
    s.name = cols[0];
    try {
      s.latitudeDeg = parse_number(cols[1]);
      s.longitudeDeg = parse_number(cols[2]);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("sites file: ") + e.what());
    }
    validate_site(s);
    sites.push_back(std::move(s));
  }
  return sites;
}

std::string_view to_string(LinkKind kind) { return kind == LinkKind::ISL ? "ISL" : "SGL"; }

LinkKind parse_link_kind(std::string_view text) {
  if (text == "ISL") return LinkKind::ISL;
  if (text == "SGL") return LinkKind::SGL;
  throw ValidationError("unknown link kind '" + std::string(text) + "'");
}

void validate_contact_plan(const ContactPlan& plan) {
  if (plan.horizonEnd < plan.horizonStart) throw ValidationError("horizon end precedes start");
  std::vector<const Contact*> sorted;
  for (const auto& c : plan.contacts) {
    if (!(c.startTime < c.endTime)) throw ValidationError("contact with empty interval");
    if (!(c.rateMbps > 0.0)) throw ValidationError("contact rate must be positive");
    if (!(c.propagationDelayMs >= 0.0)) throw ValidationError("contact delay must be non-negative");
    if (c.nodeA == c.nodeB) throw ValidationError("contact endpoints must differ");
    if (c.startTime < plan.horizonStart || c.endTime > plan.horizonEnd) {
      throw ValidationError("contact lies outside the horizon");
    }
    sorted.push_back(&c);
  }
  auto key = [](const Contact* c) {
    return std::make_tuple(std::min(c->nodeA, c->nodeB), std::max(c->nodeA, c->nodeB), c->startTime);
  };
  std::sort(sorted.begin(), sorted.end(), [&](auto* l, auto* r) { return key(l) < key(r); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto [a0, b0, s0] = key(sorted[i - 1]);
    const auto [a1, b1, s1] = key(sorted[i]);
    if (a0 == a1 && b0 == b1 && sorted[i - 1]->endTime > s1) {
      throw ValidationError("overlapping contacts for node pair " + std::to_string(a0) + "-" +
                            std::to_string(b0));
    }
  }
}

Vec3 satellite_position(const ConstellationSpec& spec, int satellite, double t) {
  const int plane = satellite / spec.satsPerPlane;
  const int slot = satellite % spec.satsPerPlane;
  const double raan = kTwoPi * plane / spec.planeCount;
  const double meanMotion = kTwoPi / spec.orbital_period_s();
  const double phase = kTwoPi * (static_cast<double>(slot) / spec.satsPerPlane +
                                 static_cast<double>(spec.phasingOffset) * plane /
                                     (static_cast<double>(spec.planeCount) * spec.satsPerPlane));
  const double u = phase + meanMotion * t;
  const double inc = spec.inclinationDeg * kDegToRad;
  const double r = spec.orbital_radius_km();
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  return {r * (co * cu - so * su * std::cos(inc)), r * (so * cu + co * su * std::cos(inc)),
          r * su * std::sin(inc)};
}

std::vector<Vec3> propagate_positions(const ConstellationSpec& spec, double t) {
  spec.validate();
  std::vector<Vec3> out;
  out.reserve(spec.satellite_count());
  for (int i = 0; i < spec.satellite_count(); ++i) out.push_back(satellite_position(spec, i, t));
  return out;
}

Vec3 site_position(const GroundSite& site, double t) {
  const double lat = site.latitudeDeg * kDegToRad;
  const double lon = site.longitudeDeg * kDegToRad + kEarthRotationRadPerS * t;
  return {kEarthRadiusKm * std::cos(lat) * std::cos(lon), kEarthRadiusKm * std::cos(lat) * std::sin(lon),
          kEarthRadiusKm * std::sin(lat)};
}

double elevation_deg(const Vec3& satellite, const Vec3& site) {
  const Vec3 los = satellite - site;
  const double s = los.dot(site) / (los.norm() * site.norm());
  return std::asin(std::clamp(s, -1.0, 1.0)) / kDegToRad;
}

std::vector<NodePair> plus_grid_pairs(const ConstellationSpec& spec) {
  spec.validate();
  std::set<NodePair> pairs;
  const int P = spec.planeCount;
  const int S = spec.satsPerPlane;
  auto add = [&](int a, int b) {
    if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  };
  for (int p = 0; p < P; ++p) {
    for (int s = 0; s < S; ++s) {
      const int id = p * S + s;
      add(id, p * S + (s + 1) % S);
      add(id, ((p + 1) % P) * S + s);
    }
  }
  return {pairs.begin(), pairs.end()};
}

ContactPlan compute_contacts(const ConstellationSpec& spec, const std::vector<GroundSite>& sites,
                             Horizon horizon, const VisibilityRules& rules, std::uint64_t seed) {
  return compute_contacts(spec, sites, horizon, rules, seed, plus_grid_pairs(spec));
}

ContactPlan compute_contacts(const ConstellationSpec& spec, const std::vector<GroundSite>& sites,
                             Horizon horizon, const VisibilityRules& rules, std::uint64_t seed,
                             const std::vector<NodePair>& islPairs) {
  spec.validate();
  if (!(rules.samplingStepS > 0.0)) throw ConfigError("sampling step must be positive");
  if (horizon.end < horizon.start) throw ConfigError("horizon end precedes start");
  validate_range(rules.islRateMbps, "ISL rate", true);
  validate_range(rules.sglRateMbps, "SGL rate", true);
  validate_range(rules.delayMs, "delay", false);
  for (const auto& s : sites) validate_site(s);

  ContactPlan plan;
  plan.horizonStart = horizon.start;
  plan.horizonEnd = horizon.end;
  if (horizon.end == horizon.start) return plan;

  const std::uint64_t contactSeed = substream_seed(seed, "contacts");
  const int satCount = spec.satellite_count();

  std::set<NodePair> canonical;
  for (auto [a, b] : islPairs) {
    if (a == b || a < 0 || b < 0 || a >= satCount || b >= satCount) {
      throw ConfigError("ISL pair references an unknown satellite");
    }
    canonical.insert({std::min(a, b), std::max(a, b)});
  }
  for (auto [a, b] : canonical) {
    plan.contacts.push_back(
        draw_contact(a, b, horizon.start, horizon.end, LinkKind::ISL, rules, contactSeed));
  }

  if (!sites.empty()) {
    const auto cells = static_cast<std::int64_t>(
        std::ceil((horizon.end - horizon.start) / rules.samplingStepS - 1e-9));
    auto cellStart = [&](std::int64_t k) { return horizon.start + static_cast<double>(k) * rules.samplingStepS; };
    auto cellEnd = [&](std::int64_t k) { return std::min(cellStart(k + 1), horizon.end); };

    // runStart[sat * |sites| + site] = first visible cell of the open run, or -1.
    std::vector<std::int64_t> runStart(static_cast<std::size_t>(satCount) * sites.size(), -1);
    auto close = [&](int sat, std::size_t site, std::int64_t lastCell) {
      auto& open = runStart[static_cast<std::size_t>(sat) * sites.size() + site];
      const NodeId siteNode = satCount + static_cast<NodeId>(site);
      plan.contacts.push_back(draw_contact(sat, siteNode, cellStart(open), cellEnd(lastCell),
                                           LinkKind::SGL, rules, contactSeed));
      open = -1;
    };

    std::vector<Vec3> sitePos(sites.size());
    for (std::int64_t k = 0; k < cells; ++k) {
      // Visibility is sampled at the midpoint of each cell.
      const double t = 0.5 * (cellStart(k) + cellEnd(k));
      for (std::size_t j = 0; j < sites.size(); ++j) sitePos[j] = site_position(sites[j], t);
      for (int sat = 0; sat < satCount; ++sat) {
        const Vec3 p = satellite_position(spec, sat, t);
        for (std::size_t j = 0; j < sites.size(); ++j) {
          auto& open = runStart[static_cast<std::size_t>(sat) * sites.size() + j];
          const bool visible = elevation_deg(p, sitePos[j]) > rules.elevationMaskDeg;
          if (visible && open < 0) {
            open = k;
          } else if (!visible && open >= 0) {
            close(sat, j, k - 1);
          }
        }
      }
    }
    for (int sat = 0; sat < satCount; ++sat) {
      for (std::size_t j = 0; j < sites.size(); ++j) {
        if (runStart[static_cast<std::size_t>(sat) * sites.size() + j] >= 0) close(sat, j, cells - 1);
      }
    }
  }

  std::sort(plan.contacts.begin(), plan.contacts.end(), contact_less);
  return plan;
}

std::vector<NodeSpec> build_nodes(const ConstellationSpec& spec,
                                  const std::vector<GroundSite>& sites, int kbCount) {
  spec.validate();
  std::vector<NodeSpec> nodes;
  nodes.reserve(spec.satellite_count() + sites.size());
  for (int i = 0; i < spec.satellite_count(); ++i) {
    nodes.push_back(make_node(i, NodeKind::CommSat, kbCount, "sat" + std::to_string(i)));
  }
  for (std::size_t j = 0; j < sites.size(); ++j) {
    nodes.push_back(make_node(spec.satellite_count() + static_cast<NodeId>(j), NodeKind::Terminal,
                              kbCount, sites[j].name));
  }
  return nodes;
}

std::vector<NodeSpec> assign_ai_capabilities(std::vector<NodeSpec> nodes,
                                             const KnowledgeBaseCatalog& catalog,
                                             double aiFraction, std::uint64_t seed) {
  if (!(aiFraction >= 0.0 && aiFraction <= 1.0)) throw ConfigError("aiFraction must lie in [0, 1]");
  std::vector<std::size_t> satellites;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_satellite()) satellites.push_back(i);
  }
  const auto aiCount = static_cast<std::size_t>(std::llround(aiFraction * static_cast<double>(satellites.size())));
  if (aiCount > 0 && catalog.size() == 0) throw ConfigError("AI satellites need a non-empty KB catalog");

  Rng rng(substream_seed(seed, "capabilities"));
  rng.shuffle(satellites);
  std::sort(satellites.begin(), satellites.begin() + static_cast<std::ptrdiff_t>(aiCount));
  for (std::size_t k = 0; k < aiCount; ++k) {
    NodeSpec& n = nodes[satellites[k]];
    const auto kb = static_cast<KbId>(rng.index(static_cast<std::uint64_t>(catalog.size())));
    n.kind = NodeKind::AISat;
    n.encoderCaps.assign(catalog.size(), 0);
    n.decoderCaps.assign(catalog.size(), 0);
    n.encoderCaps[kb] = 1;
    n.decoderCaps[kb] = 1;
    n.computeCapacity = 2;
  }
  return nodes;
}

void write_contact_plan(std::ostream& os, const ContactPlan& plan) {
  os << "# gscsat contact plan v1\n";
  os << "# contact node_a node_b start_s end_s rate_mbps delay_ms kind\n";
  os << "horizon " << format_number(plan.horizonStart) << ' ' << format_number(plan.horizonEnd) << '\n';
  for (const auto& c : plan.contacts) {
    os << "contact " << c.nodeA << ' ' << c.nodeB << ' ' << format_number(c.startTime) << ' '
       << format_number(c.endTime) << ' ' << format_number(c.rateMbps) << ' '
       << format_number(c.propagationDelayMs) << ' ' << to_string(c.linkKind) << '\n';
  }
}

ContactPlan read_contact_plan(std::istream& is) {
  ContactPlan plan;
  bool sawHorizon = false;
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
      if (tag == "horizon" && f.size() == 2) {
        plan.horizonStart = parse_number(f[0]);
        plan.horizonEnd = parse_number(f[1]);
        sawHorizon = true;
      } else if (tag == "contact" && f.size() == 7) {
        Contact c;
        c.nodeA = static_cast<NodeId>(parse_integer(f[0]));
        c.nodeB = static_cast<NodeId>(parse_integer(f[1]));
        c.startTime = parse_number(f[2]);
        c.endTime = parse_number(f[3]);
        c.rateMbps = parse_number(f[4]);
        c.propagationDelayMs = parse_number(f[5]);
        c.linkKind = parse_link_kind(f[6]);
        plan.contacts.push_back(c);
      } else {
        throw ValidationError("unrecognized record");
      }
    } catch (const ValidationError& e) {
      throw ValidationError("contact plan line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  if (!sawHorizon) throw ValidationError("contact plan has no horizon record");
  validate_contact_plan(plan);
  return plan;
}

}  // namespace gscsat
