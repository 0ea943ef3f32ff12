#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gscsat/common.hpp"
#include "gscsat/node.hpp"

namespace gscsat {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
inline constexpr double kEarthRotationRadPerS = 7.2921159e-5;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

/// Walker-delta shell of circular orbits.
struct ConstellationSpec {
  int planeCount = 0;
  int satsPerPlane = 0;
  double altitudeKm = 550.0;
  double inclinationDeg = 53.0;
  int phasingOffset = 1;
  double aiFraction = 0.0;

  int satellite_count() const { return planeCount * satsPerPlane; }
  double orbital_radius_km() const { return kEarthRadiusKm + altitudeKm; }
  double orbital_period_s() const;
  /// Throws ConfigError on a degenerate shell.
  void validate() const;
};

struct GroundSite {
  std::string name;
  double latitudeDeg = 0.0;
  double longitudeDeg = 0.0;
};

void validate_site(const GroundSite& site);
/// Reads "name,latitude_deg,longitude_deg" rows; '#' lines and a header row are skipped.
std::vector<GroundSite> load_sites_csv(const std::string& path);

enum class LinkKind { ISL, SGL };

std::string_view to_string(LinkKind kind);
LinkKind parse_link_kind(std::string_view text);

struct Contact {
  NodeId nodeA = kNoNode;
  NodeId nodeB = kNoNode;
  double startTime = 0.0;
  double endTime = 0.0;
  double rateMbps = 0.0;
  double propagationDelayMs = 0.0;
  LinkKind linkKind = LinkKind::ISL;

  friend bool operator==(const Contact&, const Contact&) = default;
};

struct Horizon {
  double start = 0.0;
  double end = 0.0;
};

struct ContactPlan {
  std::vector<Contact> contacts;
  double horizonStart = 0.0;
  double horizonEnd = 0.0;

  friend bool operator==(const ContactPlan&, const ContactPlan&) = default;
};

/// Throws ValidationError when a contact or the plan breaks its invariants.
void validate_contact_plan(const ContactPlan& plan);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct VisibilityRules {
  double elevationMaskDeg = 25.0;
  double samplingStepS = 10.0;
  Range islRateMbps{300.0, 350.0};
  Range sglRateMbps{300.0, 350.0};
  Range delayMs{5.0, 15.0};
};

using NodePair = std::pair<NodeId, NodeId>;

/// Satellite i sits in plane i / satsPerPlane at slot i % satsPerPlane.
Vec3 satellite_position(const ConstellationSpec& spec, int satellite, double t);
std::vector<Vec3> propagate_positions(const ConstellationSpec& spec, double t);
/// Site position in the same Earth-centered inertial frame (Earth rotates about +z).
Vec3 site_position(const GroundSite& site, double t);
double elevation_deg(const Vec3& satellite, const Vec3& site);

/// +Grid wiring: each satellite links to its two in-plane neighbors and to the
/// same slot in the two adjacent planes. Pairs are returned as (min, max).
std::vector<NodePair> plus_grid_pairs(const ConstellationSpec& spec);

/// Satellites take node ids 0..N-1, sites take N..N+|sites|-1.
ContactPlan compute_contacts(const ConstellationSpec& spec, const std::vector<GroundSite>& sites,
                             Horizon horizon, const VisibilityRules& rules, std::uint64_t seed);
ContactPlan compute_contacts(const ConstellationSpec& spec, const std::vector<GroundSite>& sites,
                             Horizon horizon, const VisibilityRules& rules, std::uint64_t seed,
                             const std::vector<NodePair>& islPairs);

/// Satellites as CommSat followed by one Terminal per site.
std::vector<NodeSpec> build_nodes(const ConstellationSpec& spec,
                                  const std::vector<GroundSite>& sites, int kbCount);

/// Marks exactly round(aiFraction x satellites) satellites as AI satellites. Each
/// hosts an encoder and a decoder for one uniformly drawn knowledge base.
std::vector<NodeSpec> assign_ai_capabilities(std::vector<NodeSpec> nodes,
                                             const KnowledgeBaseCatalog& catalog,
                                             double aiFraction, std::uint64_t seed);

/// Line format, one record per line:
///   horizon <start_s> <end_s>
///   contact <node_a> <node_b> <start_s> <end_s> <rate_mbps> <delay_ms> <ISL|SGL>
void write_contact_plan(std::ostream& os, const ContactPlan& plan);
ContactPlan read_contact_plan(std::istream& is);

}  // namespace gscsat
