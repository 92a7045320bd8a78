#pragma once

// Hand-built fixture graphs and data layers shared by the unit and
// acceptance suites, plus independent re-validators for the stop rules.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "corridor/geo.hpp"
#include "corridor/network.hpp"
#include "corridor/stops.hpp"

namespace testsupport {

using corridor::CandidateStop;
using corridor::CensusUnit;
using corridor::Edge;
using corridor::ElevationSample;
using corridor::GeoPoint;
using corridor::LandUseCategory;
using corridor::LandUseZone;
using corridor::NetworkGraph;
using corridor::NodeId;
using corridor::PoiRecord;
using corridor::Polygon;
using corridor::Polyline;
using corridor::Route;
using corridor::StopRules;

inline Polyline seg(const GeoPoint& a, const GeoPoint& b) {
  return Polyline(std::vector<GeoPoint>{a, b});
}

// Two arms between node 0 and node 3: arm A (via 1) is short but slow,
// arm B (via 2) is long but fast.
//   A: 2000 m / 600 s     B: 4000 m / 200 s
inline NetworkGraph diamond_graph() {
  std::vector<GeoPoint> nodes{GeoPoint(12.90, 80.10), GeoPoint(12.91, 80.11),
                              GeoPoint(12.89, 80.11), GeoPoint(12.90, 80.12)};
  std::vector<Edge> edges{
      Edge{0, 1, 1000.0, 300.0, seg(nodes[0], nodes[1])},
      Edge{1, 3, 1000.0, 300.0, seg(nodes[1], nodes[3])},
      Edge{0, 2, 2000.0, 100.0, seg(nodes[0], nodes[2])},
      Edge{2, 3, 2000.0, 100.0, seg(nodes[2], nodes[3])},
  };
  return NetworkGraph(std::move(nodes), std::move(edges));
}

inline constexpr double kDiamondArmADistance = 2000.0;
inline constexpr double kDiamondArmATime = 600.0;
inline constexpr double kDiamondArmBDistance = 4000.0;
inline constexpr double kDiamondArmBTime = 200.0;

// 0 -> 1 -> ... -> n-1, one edge each, 100 m / 10 s per hop.
inline NetworkGraph single_path_graph(int n = 4) {
  std::vector<GeoPoint> nodes;
  for (int i = 0; i < n; ++i) nodes.emplace_back(12.90, 80.10 + 0.001 * i);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i)
    edges.push_back(Edge{static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 100.0, 10.0,
                         seg(nodes[i], nodes[i + 1])});
  return NetworkGraph(std::move(nodes), std::move(edges));
}

// Node 1 is a dead end entered from the origin with probability 1/2 when
// pheromone is uniform and beta = 0: 0 -> {1 (trap), 2}, 2 -> 3 -> 4.
inline NetworkGraph trap_graph() {
  std::vector<GeoPoint> nodes{GeoPoint(12.90, 80.10), GeoPoint(12.905, 80.10),
                              GeoPoint(12.90, 80.105), GeoPoint(12.90, 80.11),
                              GeoPoint(12.90, 80.115)};
  std::vector<Edge> edges{
      Edge{0, 1, 500.0, 50.0, seg(nodes[0], nodes[1])},
      Edge{0, 2, 500.0, 50.0, seg(nodes[0], nodes[2])},
      Edge{2, 3, 500.0, 50.0, seg(nodes[2], nodes[3])},
      Edge{3, 4, 500.0, 50.0, seg(nodes[3], nodes[4])},
  };
  return NetworkGraph(std::move(nodes), std::move(edges));
}

// 5x5 lattice with unit costs, node (r, c) -> id r*5+c, 80 directed edges.
inline NetworkGraph gridville_graph() {
  std::vector<GeoPoint> nodes;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) nodes.emplace_back(12.90 + 0.01 * r, 80.10 + 0.01 * c);
  const auto id = [](int r, int c) { return static_cast<NodeId>(r * 5 + c); };
  std::vector<Edge> edges;
  const auto link = [&](NodeId a, NodeId b) {
    edges.push_back(Edge{a, b, 1.0, 1.0, seg(nodes[a], nodes[b])});
    edges.push_back(Edge{b, a, 1.0, 1.0, seg(nodes[b], nodes[a])});
  };
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c + 1 < 5; ++c) link(id(r, c), id(r, c + 1));
  for (int r = 0; r + 1 < 5; ++r)
    for (int c = 0; c < 5; ++c) link(id(r, c), id(r + 1, c));
  return NetworkGraph(std::move(nodes), std::move(edges));
}

// The gridville feature order used for the committed file: east/west edges
// row by row (assigns row-major node ids), then south/north edges.
inline std::vector<corridor::EdgeRecord> gridville_edge_records() {
  std::vector<GeoPoint> nodes;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) nodes.emplace_back(12.90 + 0.01 * r, 80.10 + 0.01 * c);
  const auto at = [&](int r, int c) -> const GeoPoint& { return nodes[r * 5 + c]; };
  std::vector<corridor::EdgeRecord> records;
  const auto link = [&](const GeoPoint& a, const GeoPoint& b) {
    records.push_back({seg(a, b), 1.0, 1.0});
    records.push_back({seg(b, a), 1.0, 1.0});
  };
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c + 1 < 5; ++c) link(at(r, c), at(r, c + 1));
  for (int r = 0; r + 1 < 5; ++r)
    for (int c = 0; c < 5; ++c) link(at(r, c), at(r + 1, c));
  return records;
}

// ---- stop-rule layers ------------------------------------------------

struct StopLayers {
  std::vector<LandUseZone> landuse;
  std::vector<CensusUnit> census;
  std::vector<PoiRecord> pois;
  std::vector<ElevationSample> elevation;
};

inline std::vector<GeoPoint> square_ring(double min_lat, double min_lon, double max_lat,
                                         double max_lon) {
  return {GeoPoint(min_lat, min_lon), GeoPoint(min_lat, max_lon), GeoPoint(max_lat, max_lon),
          GeoPoint(max_lat, min_lon), GeoPoint(min_lat, min_lon)};
}

inline Polygon square(double min_lat, double min_lon, double max_lat, double max_lon) {
  return Polygon(square_ring(min_lat, min_lon, max_lat, max_lon));
}

// One dense residential zone containing one heavy POI cluster; every
// in-zone grid cell passes all gates under single_zone_rules().
inline StopLayers single_zone_fixture() {
  StopLayers layers;
  // ~3.1 km square centered at (13.0, 80.2)
  const double half = 0.014;
  layers.landuse.push_back(
      {square(13.0 - half, 80.2 - half, 13.0 + half, 80.2 + half), LandUseCategory::residential});
  layers.census.emplace_back(square(13.0 - half, 80.2 - half, 13.0 + half, 80.2 + half), 50000,
                             9.6);
  layers.pois.push_back({GeoPoint(13.0, 80.2), "hub", 2.0});
  layers.pois.push_back({GeoPoint(13.001, 80.201), "market", 1.0});
  layers.pois.push_back({GeoPoint(12.999, 80.199), "school", 1.0});
  layers.elevation.push_back({GeoPoint(12.995, 80.195), 10.0});
  layers.elevation.push_back({GeoPoint(13.005, 80.205), 14.0});
  layers.elevation.push_back({GeoPoint(12.995, 80.205), 12.0});
  layers.elevation.push_back({GeoPoint(13.005, 80.195), 13.0});
  return layers;
}

inline StopRules single_zone_rules() {
  StopRules rules;
  rules.min_density = 1000.0;
  rules.poi_radius_m = 2500.0;  // covers the whole zone from any cell
  rules.min_poi_weight = 2.0;
  rules.allowed_landuse = {LandUseCategory::residential, LandUseCategory::commercial};
  rules.max_slope_gate = 30.0;
  rules.grid_cell_m = 500.0;
  rules.corridor_radius_m = 1000.0;
  rules.min_spacing_m = 1200.0;
  return rules;
}

// Randomized layers around (13.0, 80.2); overlaps and gate-failing content
// are intentional.
inline StopLayers random_layer_fixture(std::mt19937_64& rng) {
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const auto category = [&rng]() {
    static const LandUseCategory all[] = {
        LandUseCategory::residential,  LandUseCategory::commercial,
        LandUseCategory::industrial,   LandUseCategory::institutional,
        LandUseCategory::open_land,    LandUseCategory::water,
        LandUseCategory::other};
    return all[rng() % 7];
  };

  StopLayers layers;
  const int n_zones = 4 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n_zones; ++i) {
    const double clat = uniform(12.985, 13.015), clon = uniform(80.185, 80.215);
    const double half = uniform(0.006, 0.016);
    layers.landuse.push_back({square(clat - half, clon - half, clat + half, clon + half),
                              category()});
  }
  const int n_units = 2 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n_units; ++i) {
    const double clat = uniform(12.985, 13.015), clon = uniform(80.185, 80.215);
    const double half = uniform(0.010, 0.022);
    layers.census.emplace_back(square(clat - half, clon - half, clat + half, clon + half),
                               static_cast<long long>(uniform(10000, 300000)),
                               uniform(1.0, 20.0));
  }
  const int n_pois = 3 + static_cast<int>(rng() % 10);
  for (int i = 0; i < n_pois; ++i)
    layers.pois.push_back({GeoPoint(uniform(12.985, 13.015), uniform(80.185, 80.215)), "poi",
                           uniform(0.5, 5.0)});
  const int n_elev = static_cast<int>(rng() % 13);
  for (int i = 0; i < n_elev; ++i)
    layers.elevation.push_back(
        {GeoPoint(uniform(12.985, 13.015), uniform(80.185, 80.215)), uniform(0.0, 50.0)});
  return layers;
}

inline StopRules random_rules(std::mt19937_64& rng) {
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  StopRules rules;
  rules.min_density = uniform(0.0, 6000.0);
  rules.poi_radius_m = uniform(400.0, 1500.0);
  rules.min_poi_weight = uniform(0.0, 2.5);
  rules.allowed_landuse.clear();
  static const LandUseCategory all[] = {
      LandUseCategory::residential,  LandUseCategory::commercial,
      LandUseCategory::industrial,   LandUseCategory::institutional,
      LandUseCategory::open_land,    LandUseCategory::water,
      LandUseCategory::other};
  for (LandUseCategory c : all)
    if (rng() % 2) rules.allowed_landuse.insert(c);
  if (rules.allowed_landuse.empty()) rules.allowed_landuse.insert(LandUseCategory::residential);
  rules.max_slope_gate = uniform(15.0, 55.0);
  rules.grid_cell_m = uniform(400.0, 900.0);
  rules.corridor_radius_m = uniform(500.0, 1500.0);
  rules.min_spacing_m = uniform(600.0, 2000.0);
  return rules;
}

// A straight-ish route through the random fixture area for selection tests.
inline Route route_through(const std::vector<GeoPoint>& waypoints) {
  Route r;
  for (std::size_t i = 0; i < waypoints.size(); ++i) r.nodes.push_back(static_cast<NodeId>(i));
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double len = corridor::haversine_distance(waypoints[i], waypoints[i + 1]);
    Edge e{static_cast<NodeId>(i), static_cast<NodeId>(i + 1), len, len / 10.0,
           seg(waypoints[i], waypoints[i + 1])};
    r.total_distance_m += e.length_m;
    r.total_time_s += e.travel_time_s;
    r.edges.push_back(std::move(e));
  }
  return r;
}

// ---- independent gate re-validation (the criterion-6 oracle) ----------

// Recomputes all four gates for a location straight from the raw layers.
// Returns an empty string when every gate passes, else the failing rule.
inline std::string recheck_gates(const GeoPoint& loc, const StopLayers& layers,
                                 const StopRules& rules) {
  const LandUseZone* zone = nullptr;
  for (const auto& z : layers.landuse)
    if (corridor::point_in_polygon(loc, z.geometry)) {
      zone = &z;
      break;
    }
  if (!zone) return "no containing land-use zone";
  if (!rules.allowed_landuse.contains(zone->category))
    return std::string("land-use category not allowed: ") + corridor::to_string(zone->category);

  const CensusUnit* unit = nullptr;
  for (const auto& u : layers.census)
    if (corridor::point_in_polygon(loc, u.geometry)) {
      unit = &u;
      break;
    }
  if (!unit) return "no containing census unit";
  if (unit->density < rules.min_density) return "density below threshold";

  double poi_weight = 0.0;
  for (const auto& p : layers.pois)
    if (corridor::haversine_distance(loc, p.location) <= rules.poi_radius_m)
      poi_weight += p.weight;
  if (poi_weight < rules.min_poi_weight) return "POI weight below threshold";

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : layers.elevation)
    if (corridor::haversine_distance(loc, s.location) <= rules.poi_radius_m) {
      lo = std::min(lo, s.elevation_m);
      hi = std::max(hi, s.elevation_m);
    }
  if (lo <= hi && hi - lo > rules.max_slope_gate) return "elevation spread above gate";
  return "";
}

// Checks the documented output constraints of select_route_stops.
inline std::string recheck_selection(const Route& route, const std::vector<CandidateStop>& stops,
                                     const StopRules& rules) {
  const Polyline geom = route.geometry();
  double prev_along = -std::numeric_limits<double>::infinity();
  std::vector<double> alongs;
  for (const auto& s : stops) {
    const auto proj = corridor::project_to_polyline(s.location, geom);
    if (proj.distance_m > rules.corridor_radius_m) return "stop outside corridor";
    if (proj.along_m <= prev_along) return "stops not strictly ordered along route";
    prev_along = proj.along_m;
    alongs.push_back(proj.along_m);
  }
  for (std::size_t i = 0; i < alongs.size(); ++i)
    for (std::size_t j = i + 1; j < alongs.size(); ++j)
      if (std::abs(alongs[i] - alongs[j]) < rules.min_spacing_m)
        return "stop spacing below minimum";
  return "";
}

}  // namespace testsupport
