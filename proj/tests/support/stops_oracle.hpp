#pragma once

// Straight-line re-implementation of the documented stop-placement rules,
// used to cross-check the stops module and to freeze fixture expectations.
// Shares only the geo primitives with the implementation it checks.

#include <algorithm>
#include <cmath>
#include <vector>

#include "corridor/geo.hpp"
#include "corridor/stops.hpp"
#include "support/fixtures.hpp"

namespace testsupport {

struct OracleStop {
  GeoPoint location;
  double density = 0.0;
  double poi_weight = 0.0;
  double score = 0.0;
};

// Mirrors the documented grid contract: bounds are the union of land-use
// and census geometry, centers at min + (i + 0.5) * pitch.
inline std::vector<GeoPoint> oracle_grid(const StopLayers& layers, const StopRules& rules) {
  corridor::BoundingBox box;
  for (const auto& z : layers.landuse) box.expand(corridor::bounds_of(z.geometry));
  for (const auto& u : layers.census) box.expand(corridor::bounds_of(u.geometry));
  const double dlat = rules.grid_cell_m / corridor::kMetersPerDegLat;
  const double mid = (box.min_lat + box.max_lat) / 2.0;
  const double dlon =
      rules.grid_cell_m / (corridor::kMetersPerDegLat * std::cos(corridor::deg2rad(mid)));
  const long rows =
      std::max<long>(1, static_cast<long>(std::ceil((box.max_lat - box.min_lat) / dlat)));
  const long cols =
      std::max<long>(1, static_cast<long>(std::ceil((box.max_lon - box.min_lon) / dlon)));
  std::vector<GeoPoint> centers;
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      centers.emplace_back(box.min_lat + (static_cast<double>(i) + 0.5) * dlat,
                           box.min_lon + (static_cast<double>(j) + 0.5) * dlon);
  return centers;
}

inline std::vector<OracleStop> oracle_score_candidates(const StopLayers& layers,
                                                       const StopRules& rules) {
  std::vector<OracleStop> admitted;
  for (const GeoPoint& center : oracle_grid(layers, rules)) {
    if (!recheck_gates(center, layers, rules).empty()) continue;
    OracleStop s;
    s.location = center;
    for (const auto& u : layers.census)
      if (corridor::point_in_polygon(center, u.geometry)) {
        s.density = u.density;
        break;
      }
    for (const auto& p : layers.pois)
      if (corridor::haversine_distance(center, p.location) <= rules.poi_radius_m)
        s.poi_weight += p.weight;
    admitted.push_back(s);
  }
  double max_density = 0.0, max_poi = 0.0;
  for (const auto& s : admitted) {
    max_density = std::max(max_density, s.density);
    max_poi = std::max(max_poi, s.poi_weight);
  }
  for (auto& s : admitted)
    s.score = (max_density > 0.0 ? s.density / max_density : 0.0) +
              (max_poi > 0.0 ? s.poi_weight / max_poi : 0.0);
  std::sort(admitted.begin(), admitted.end(), [](const OracleStop& a, const OracleStop& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.location.lat != b.location.lat) return a.location.lat < b.location.lat;
    return a.location.lon < b.location.lon;
  });
  return admitted;
}

// Greedy score-first selection, re-traced directly.
inline std::vector<OracleStop> oracle_select_route_stops(const Route& route,
                                                         const std::vector<OracleStop>& candidates,
                                                         const StopRules& rules) {
  const Polyline geom = route.geometry();
  const double route_len = geom.length_m();

  struct WithAlong {
    OracleStop stop;
    double along = 0.0;
  };
  std::vector<WithAlong> eligible;
  for (const auto& c : candidates) {
    const auto proj = corridor::project_to_polyline(c.location, geom);
    if (proj.distance_m > rules.corridor_radius_m) continue;
    if (proj.along_m <= 0.0 || proj.along_m >= route_len) continue;
    eligible.push_back({c, proj.along_m});
  }
  std::sort(eligible.begin(), eligible.end(), [](const WithAlong& a, const WithAlong& b) {
    if (a.stop.score != b.stop.score) return a.stop.score > b.stop.score;
    if (a.stop.location.lat != b.stop.location.lat)
      return a.stop.location.lat < b.stop.location.lat;
    return a.stop.location.lon < b.stop.location.lon;
  });
  std::vector<WithAlong> kept;
  for (const auto& e : eligible) {
    bool ok = true;
    for (const auto& k : kept)
      if (std::abs(e.along - k.along) < rules.min_spacing_m) ok = false;
    if (ok) kept.push_back(e);
  }
  std::sort(kept.begin(), kept.end(),
            [](const WithAlong& a, const WithAlong& b) { return a.along < b.along; });
  std::vector<OracleStop> out;
  for (const auto& k : kept) out.push_back(k.stop);
  return out;
}

}  // namespace testsupport
