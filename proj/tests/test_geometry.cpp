#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gscsat/geometry.hpp"

using namespace gscsat;

namespace {

// Textbook rotation of the perifocal position; written out here rather than
// reusing the library so the elevation checks are independent.
Vec3 reference_position(const ConstellationSpec& s, int sat, double t) {
  const double pi = std::numbers::pi;
  const double r = kEarthRadiusKm + s.altitudeKm;
  const int plane = sat / s.satsPerPlane;
  const int slot = sat % s.satsPerPlane;
  const double raan = 2.0 * pi * plane / s.planeCount;
  const double n = std::sqrt(kEarthMuKm3PerS2 / (r * r * r));
  const double u = 2.0 * pi * (static_cast<double>(slot) / s.satsPerPlane +
                               static_cast<double>(s.phasingOffset) * plane / (s.planeCount * s.satsPerPlane)) +
                   n * t;
  const double inc = s.inclinationDeg * pi / 180.0;
  return {r * (std::cos(raan) * std::cos(u) - std::sin(raan) * std::cos(inc) * std::sin(u)),
          r * (std::sin(raan) * std::cos(u) + std::cos(raan) * std::cos(inc) * std::sin(u)),
          r * std::sin(inc) * std::sin(u)};
}

double reference_elevation(const Vec3& sat, const GroundSite& site, double t) {
  const double d2r = std::numbers::pi / 180.0;
  const double lat = site.latitudeDeg * d2r;
  const double lon = site.longitudeDeg * d2r + kEarthRotationRadPerS * t;
  const Vec3 up{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
  const Vec3 g{kEarthRadiusKm * up.x, kEarthRadiusKm * up.y, kEarthRadiusKm * up.z};
  const Vec3 d = sat - g;
  return std::asin(d.dot(up) / d.norm()) / d2r;
}

ConstellationSpec shell(int planes, int perPlane) { return {planes, perPlane, 550.0, 53.0, planes > 1 ? 1 : 0, 0.2}; }

std::vector<GroundSite> bundled_sites() { return load_sites_csv(std::string(GSCSAT_DATA_DIR) + "/sites.csv"); }

}  // namespace

TEST_CASE("positions sit on the orbital sphere") {
  const auto s = shell(5, 7);
  for (double t : {0.0, 123.4, 5000.0}) {
    const auto pos = propagate_positions(s, t);
    REQUIRE(pos.size() == 35u);
    for (const auto& p : pos) CHECK(std::abs(p.norm() / s.orbital_radius_km() - 1.0) < 1e-6);
  }
}

TEST_CASE("zero-phase satellite starts on the ascending-node meridian") {
  const auto p = satellite_position(shell(1, 1), 0, 0.0);
  CHECK(p.x == doctest::Approx(6921.0));
  CHECK(std::abs(p.y) < 1e-9);
  CHECK(std::abs(p.z) < 1e-9);
}

TEST_CASE("orbit repeats after one period") {
  const auto s = shell(3, 4);
  const double T = s.orbital_period_s();
  for (int i = 0; i < s.satellite_count(); ++i) {
    const Vec3 d = satellite_position(s, i, 77.0) - satellite_position(s, i, 77.0 + T);
    CHECK(d.norm() < 1e-6);
  }
}

TEST_CASE("half a plane apart means antipodal") {
  const auto s = shell(2, 8);
  const Vec3 a = satellite_position(s, 0, 300.0);
  const Vec3 b = satellite_position(s, 4, 300.0);
  CHECK(std::abs(a.dot(b) / (a.norm() * b.norm()) + 1.0) < 1e-9);
}

TEST_CASE("library positions agree with the reference rotation") {
  const auto s = shell(6, 9);
  for (int i = 0; i < s.satellite_count(); i += 5) {
    const Vec3 d = satellite_position(s, i, 901.0) - reference_position(s, i, 901.0);
    CHECK(d.norm() < 1e-6);
  }
}

TEST_CASE("degenerate constellations are configuration errors") {
  CHECK_THROWS_AS(shell(0, 10).validate(), ConfigError);
  CHECK_THROWS_AS(propagate_positions(shell(0, 10), 0.0), ConfigError);
  ConstellationSpec bad = shell(2, 2);
  bad.aiFraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("a zenith pass yields a single SGL contact for the sample") {
  const auto s = shell(1, 1);
  const Vec3 p = satellite_position(s, 0, 5.0);
  const double r2d = 180.0 / std::numbers::pi;
  GroundSite site{"below", std::asin(p.z / p.norm()) * r2d,
                  (std::atan2(p.y, p.x) - kEarthRotationRadPerS * 5.0) * r2d};
  VisibilityRules rules;
  const auto plan = compute_contacts(s, {site}, {0.0, 10.0}, rules, 3, {});
  REQUIRE(plan.contacts.size() == 1u);
  const Contact& c = plan.contacts[0];
  CHECK(c.linkKind == LinkKind::SGL);
  CHECK(c.nodeA == 0);
  CHECK(c.nodeB == 1);
  CHECK(c.startTime == 0.0);
  CHECK(c.endTime == 10.0);
}

TEST_CASE("+Grid wiring and full-horizon ISLs") {
  const auto s = shell(4, 5);
  const auto pairs = plus_grid_pairs(s);
  CHECK(pairs.size() == 40u);  // 20 intra-plane ring links + 20 inter-plane links
  std::vector<int> degree(20, 0);
  for (auto [a, b] : pairs) {
    CHECK(a < b);
    ++degree[a];
    ++degree[b];
  }
  for (int d : degree) CHECK(d == 4);

  const auto plan = compute_contacts(s, {}, {0.0, 600.0}, VisibilityRules{}, 11);
  CHECK(plan.contacts.size() == pairs.size());
  for (const auto& c : plan.contacts) {
    CHECK(c.linkKind == LinkKind::ISL);
    CHECK(c.startTime == 0.0);
    CHECK(c.endTime == 600.0);
  }
}

TEST_CASE("rates and delays follow the configured ranges") {
  const auto plan = compute_contacts(shell(10, 10), bundled_sites(), {0.0, 1800.0}, VisibilityRules{}, 42);
  REQUIRE(!plan.contacts.empty());
  bool sawSgl = false;
  for (const auto& c : plan.contacts) {
    CHECK(c.rateMbps >= 300.0);
    CHECK(c.rateMbps <= 350.0);
    CHECK(c.propagationDelayMs >= 5.0);
    CHECK(c.propagationDelayMs <= 15.0);
    sawSgl = sawSgl || c.linkKind == LinkKind::SGL;
  }
  CHECK(sawSgl);
  CHECK_NOTHROW(validate_contact_plan(plan));
}

TEST_CASE("SGL contacts are visible at their midpoint") {
  const auto s = shell(10, 10);
  const auto sites = bundled_sites();
  VisibilityRules rules;
  const auto plan = compute_contacts(s, sites, {0.0, 3600.0}, rules, 5);
  int checked = 0;
  for (const auto& c : plan.contacts) {
    if (c.linkKind != LinkKind::SGL) continue;
    const int sat = std::min(c.nodeA, c.nodeB);
    const int site = std::max(c.nodeA, c.nodeB) - s.satellite_count();
    const double mid = 0.5 * (c.startTime + c.endTime);
    CHECK(reference_elevation(reference_position(s, sat, mid), sites[site], mid) > rules.elevationMaskDeg);
    CHECK(std::fmod(c.startTime, rules.samplingStepS) == 0.0);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("contact plans are deterministic and independent of pair order") {
  const auto s = shell(4, 6);
  const auto sites = bundled_sites();
  const Horizon h{0.0, 1200.0};
  auto pairs = plus_grid_pairs(s);
  const auto a = compute_contacts(s, sites, h, VisibilityRules{}, 9, pairs);
  for (auto& p : pairs) std::swap(p.first, p.second);
  std::reverse(pairs.begin(), pairs.end());
  const auto b = compute_contacts(s, sites, h, VisibilityRules{}, 9, pairs);
  CHECK(a == b);
  CHECK(a == compute_contacts(s, sites, h, VisibilityRules{}, 9));
  CHECK_FALSE(a == compute_contacts(s, sites, h, VisibilityRules{}, 10));
}

TEST_CASE("degenerate horizon and missing sites") {
  const auto s = shell(3, 3);
  CHECK(compute_contacts(s, bundled_sites(), {50.0, 50.0}, VisibilityRules{}, 1).contacts.empty());
  for (const auto& c : compute_contacts(s, {}, {0.0, 100.0}, VisibilityRules{}, 1).contacts) {
    CHECK(c.linkKind == LinkKind::ISL);
  }
}

TEST_CASE("AI capability assignment") {
  const KnowledgeBaseCatalog catalog = KnowledgeBaseCatalog::with_size(3);
  SUBCASE("fraction zero leaves every vector empty") {
    const auto nodes = assign_ai_capabilities(build_nodes(shell(4, 4), {}, 3), catalog, 0.0, 1);
    for (const auto& n : nodes) CHECK_FALSE(n.gsc_capable());
  }
  SUBCASE("fraction one covers every satellite") {
    const auto nodes = assign_ai_capabilities(build_nodes(shell(4, 4), bundled_sites(), 3), catalog, 1.0, 1);
    for (const auto& n : nodes) CHECK(n.gsc_capable() == n.is_satellite());
  }
  SUBCASE("twenty percent of 2,500 is exactly 500") {
    const auto nodes = assign_ai_capabilities(build_nodes(shell(50, 50), {}, 3), catalog, 0.2, 1);
    int ai = 0;
    for (const auto& n : nodes) {
      if (n.kind == NodeKind::AISat) {
        ++ai;
        CHECK(n.gsc_capable());
        CHECK(n.used_slots() <= n.computeCapacity);
      }
    }
    CHECK(ai == 500);
    CHECK(nodes == assign_ai_capabilities(build_nodes(shell(50, 50), {}, 3), catalog, 0.2, 1));
  }
}

TEST_CASE("contact plan text round trip") {
  const auto plan = compute_contacts(shell(3, 4), bundled_sites(), {0.0, 900.0}, VisibilityRules{}, 8);
  std::stringstream ss;
  write_contact_plan(ss, plan);
  CHECK(read_contact_plan(ss) == plan);
}

TEST_CASE("contact plan validation") {
  ContactPlan p{{{0, 1, 0.0, 10.0, 300.0, 5.0, LinkKind::ISL}, {1, 0, 5.0, 15.0, 300.0, 5.0, LinkKind::ISL}}, 0.0, 20.0};
  CHECK_THROWS_AS(validate_contact_plan(p), ValidationError);
  p.contacts[1].startTime = 10.0;
  CHECK_NOTHROW(validate_contact_plan(p));
  p.contacts[1].endTime = 25.0;
  CHECK_THROWS_AS(validate_contact_plan(p), ValidationError);
}

TEST_CASE("bundled sites") {
  const auto sites = bundled_sites();
  REQUIRE(sites.size() == 10u);
  CHECK(sites.front().name == "Xian");
  CHECK(sites.back().name == "Istanbul");
}
