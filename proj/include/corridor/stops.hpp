#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/geo.hpp"
#include "corridor/network.hpp"

namespace corridor {

enum class LandUseCategory {
  residential,
  commercial,
  industrial,
  institutional,
  open_land,
  water,
  other,
};

inline const char* to_string(LandUseCategory c) {
  switch (c) {
    case LandUseCategory::residential: return "residential";
    case LandUseCategory::commercial: return "commercial";
    case LandUseCategory::industrial: return "industrial";
    case LandUseCategory::institutional: return "institutional";
    case LandUseCategory::open_land: return "open";
    case LandUseCategory::water: return "water";
    case LandUseCategory::other: return "other";
  }
  return "other";
}

inline std::optional<LandUseCategory> parse_landuse_category(const std::string& s) {
  if (s == "residential") return LandUseCategory::residential;
  if (s == "commercial") return LandUseCategory::commercial;
  if (s == "industrial") return LandUseCategory::industrial;
  if (s == "institutional") return LandUseCategory::institutional;
  if (s == "open") return LandUseCategory::open_land;
  if (s == "water") return LandUseCategory::water;
  if (s == "other") return LandUseCategory::other;
  return std::nullopt;
}

struct LandUseZone {
  Polygon geometry;
  LandUseCategory category;
};

struct CensusUnit {
  Polygon geometry;
  long long population = 0;
  double area_km2 = 1.0;
  double density = 0.0;  // population / area_km2

  CensusUnit(Polygon geom, long long pop, double area)
      : geometry(std::move(geom)), population(pop), area_km2(area) {
    if (population < 0) throw ValidationError("census: population must be >= 0");
    if (!(std::isfinite(area_km2) && area_km2 > 0.0))
      throw ValidationError("census: area_km2 must be > 0");
    density = static_cast<double>(population) / area_km2;
  }
};

struct PoiRecord {
  GeoPoint location;
  std::string category;
  double weight = 1.0;
};

struct ElevationSample {
  GeoPoint location;
  double elevation_m = 0.0;
};

// The four placement gates plus grid, corridor and spacing geometry. The
// numeric defaults are engineering choices meant to be tuned per city.
struct StopRules {
  double min_density = 0.0;           // persons/km2
  double poi_radius_m = 800.0;        // radius for POI weight and elevation spread
  double min_poi_weight = 0.0;        // summed weight threshold inside the radius
  std::set<LandUseCategory> allowed_landuse = {
      LandUseCategory::residential, LandUseCategory::commercial,
      LandUseCategory::institutional};
  double max_slope_gate = 30.0;       // max elevation spread (m) inside the radius
  double grid_cell_m = 500.0;         // evaluation grid pitch
  double corridor_radius_m = 1000.0;  // route buffer half-width
  double min_spacing_m = 1200.0;      // minimum along-route stop separation

  void validate() const {
    const auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!nonneg(min_density)) throw ValidationError("stops: min_density must be >= 0");
    if (!nonneg(poi_radius_m)) throw ValidationError("stops: poi_radius_m must be >= 0");
    if (!nonneg(min_poi_weight)) throw ValidationError("stops: min_poi_weight must be >= 0");
    if (!nonneg(max_slope_gate)) throw ValidationError("stops: max_slope_gate must be >= 0");
    if (!positive(grid_cell_m)) throw ValidationError("stops: grid_cell_m must be > 0");
    if (!positive(corridor_radius_m))
      throw ValidationError("stops: corridor_radius_m must be > 0");
    if (!positive(min_spacing_m)) throw ValidationError("stops: min_spacing_m must be > 0");
  }
};

// Gate readings recorded for each admitted cell so admissions can be
// re-checked against the raw layers.
struct StopEvidence {
  double density = 0.0;            // containing census unit
  double poi_weight = 0.0;         // summed within poi_radius_m
  LandUseCategory landuse = LandUseCategory::other;
  double elevation_spread_m = 0.0;  // max-min among in-range samples
  bool elevation_vacuous = false;   // no samples within range
};

struct CandidateStop {
  GeoPoint location;
  double score = 0.0;
  StopEvidence evidence;
};

// Evaluates a square grid over the union bounds of the land-use and census
// layers. A cell center is admitted iff all four gates pass; its score is
// density/max_density + poi_weight/max_poi_weight over the admitted set.
inline std::vector<CandidateStop> score_candidates(const std::vector<LandUseZone>& landuse,
                                                   const std::vector<CensusUnit>& census,
                                                   const std::vector<PoiRecord>& pois,
                                                   const std::vector<ElevationSample>& elevation,
                                                   const StopRules& rules) {
  rules.validate();
  if (landuse.empty()) throw ValidationError("score_candidates: land-use layer is empty");
  if (census.empty()) throw ValidationError("score_candidates: census layer is empty");

  BoundingBox box;
  std::vector<BoundingBox> zone_bounds, unit_bounds;
  zone_bounds.reserve(landuse.size());
  unit_bounds.reserve(census.size());
  for (const auto& z : landuse) {
    zone_bounds.push_back(bounds_of(z.geometry));
    box.expand(zone_bounds.back());
  }
  for (const auto& u : census) {
    unit_bounds.push_back(bounds_of(u.geometry));
    box.expand(unit_bounds.back());
  }

  const double dlat = rules.grid_cell_m / kMetersPerDegLat;
  const double mid_lat = (box.min_lat + box.max_lat) / 2.0;
  const double dlon = rules.grid_cell_m / (kMetersPerDegLat * std::cos(deg2rad(mid_lat)));
  const auto cells_along = [](double extent, double pitch) {
    return std::max<long>(1, static_cast<long>(std::ceil(extent / pitch)));
  };
  const long rows = cells_along(box.max_lat - box.min_lat, dlat);
  const long cols = cells_along(box.max_lon - box.min_lon, dlon);

  std::vector<CandidateStop> admitted;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      const GeoPoint center(box.min_lat + (static_cast<double>(i) + 0.5) * dlat,
                            box.min_lon + (static_cast<double>(j) + 0.5) * dlon);

      // (a) land use: the first containing zone in layer order decides.
      const LandUseZone* zone = nullptr;
      for (std::size_t z = 0; z < landuse.size(); ++z) {
        if (!zone_bounds[z].contains(center)) continue;
        if (point_in_polygon(center, landuse[z].geometry)) {
          zone = &landuse[z];
          break;
        }
      }
      if (!zone || !rules.allowed_landuse.contains(zone->category)) continue;

      // (b) population density of the containing census unit.
      const CensusUnit* unit = nullptr;
      for (std::size_t u = 0; u < census.size(); ++u) {
        if (!unit_bounds[u].contains(center)) continue;
        if (point_in_polygon(center, census[u].geometry)) {
          unit = &census[u];
          break;
        }
      }
      if (!unit || unit->density < rules.min_density) continue;

      // (c) summed POI weight within the radius.
      double poi_weight = 0.0;
      for (const auto& poi : pois)
        if (haversine_distance(center, poi.location) <= rules.poi_radius_m)
          poi_weight += poi.weight;
      if (poi_weight < rules.min_poi_weight) continue;

      // (d) elevation spread within the radius; vacuous with no samples.
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const auto& s : elevation) {
        if (haversine_distance(center, s.location) <= rules.poi_radius_m) {
          lo = std::min(lo, s.elevation_m);
          hi = std::max(hi, s.elevation_m);
        }
      }
      const bool vacuous = lo > hi;
      const double spread = vacuous ? 0.0 : hi - lo;
      if (!vacuous && spread > rules.max_slope_gate) continue;

      CandidateStop stop;
      stop.location = center;
      stop.evidence = {unit->density, poi_weight, zone->category, spread, vacuous};
      admitted.push_back(std::move(stop));
    }
  }

  double max_density = 0.0, max_poi = 0.0;
  for (const auto& c : admitted) {
    max_density = std::max(max_density, c.evidence.density);
    max_poi = std::max(max_poi, c.evidence.poi_weight);
  }
  for (auto& c : admitted) {
    const double density_frac = max_density > 0.0 ? c.evidence.density / max_density : 0.0;
    const double poi_frac = max_poi > 0.0 ? c.evidence.poi_weight / max_poi : 0.0;
    c.score = density_frac + poi_frac;
  }

  std::sort(admitted.begin(), admitted.end(), [](const CandidateStop& a, const CandidateStop& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.location.lat != b.location.lat) return a.location.lat < b.location.lat;
    return a.location.lon < b.location.lon;
  });
  return admitted;
}

// Along-route arc position of a point's projection onto the route geometry.
inline double along_route_position(const Route& route, const GeoPoint& p) {
  return project_to_polyline(p, route.geometry()).along_m;
}

// Corridor filter plus greedy score-first spacing selection. Candidates
// whose projection lands exactly on a terminus are not intermediate stops
// and are skipped. Output is ordered by along-route position.
inline std::vector<CandidateStop> select_route_stops(const Route& route,
                                                     const std::vector<CandidateStop>& candidates,
                                                     const StopRules& rules) {
  rules.validate();
  if (route.nodes.size() < 2) throw ValidationError("select_route_stops: empty route");
  if (candidates.empty()) return {};

  const Polyline geom = route.geometry();
  const double route_len = geom.length_m();

  struct Eligible {
    const CandidateStop* stop;
    double along_m;
  };
  std::vector<Eligible> eligible;
  for (const auto& c : candidates) {
    const auto proj = project_to_polyline(c.location, geom);
    if (proj.distance_m > rules.corridor_radius_m) continue;
    if (proj.along_m <= 0.0 || proj.along_m >= route_len) continue;
    eligible.push_back({&c, proj.along_m});
  }

  std::sort(eligible.begin(), eligible.end(), [](const Eligible& a, const Eligible& b) {
    if (a.stop->score != b.stop->score) return a.stop->score > b.stop->score;
    if (a.stop->location.lat != b.stop->location.lat)
      return a.stop->location.lat < b.stop->location.lat;
    return a.stop->location.lon < b.stop->location.lon;
  });

  std::vector<Eligible> kept;
  for (const auto& e : eligible) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](const Eligible& k) {
      return std::abs(e.along_m - k.along_m) >= rules.min_spacing_m;
    });
    if (clear) kept.push_back(e);
  }

  std::sort(kept.begin(), kept.end(),
            [](const Eligible& a, const Eligible& b) { return a.along_m < b.along_m; });
  std::vector<CandidateStop> out;
  out.reserve(kept.size());
  for (const auto& k : kept) out.push_back(*k.stop);
  return out;
}

struct MatchedStopPair {
  int model_index = 0;
  int reference_index = 0;
  double distance_m = 0.0;
};

// Count delta and nearest-match pairing between a model stop list and a
// reference stop list on the same corridor.
struct VariationReport {
  int model_count = 0;
  int reference_count = 0;
  int count_delta = 0;  // model - reference
  std::vector<MatchedStopPair> matched;
  std::vector<int> unmatched_model;
  std::vector<int> unmatched_reference;
};

inline VariationReport compare_with_reference(const std::vector<CandidateStop>& model,
                                              const std::vector<GeoPoint>& reference,
                                              double match_radius_m) {
  VariationReport report;
  report.model_count = static_cast<int>(model.size());
  report.reference_count = static_cast<int>(reference.size());
  report.count_delta = report.model_count - report.reference_count;

  std::vector<char> taken(reference.size(), 0);
  for (int mi = 0; mi < static_cast<int>(model.size()); ++mi) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int ri = 0; ri < static_cast<int>(reference.size()); ++ri) {
      if (taken[ri]) continue;
      const double d = haversine_distance(model[mi].location, reference[ri]);
      if (d <= match_radius_m && d < best_d) {
        best_d = d;
        best = ri;
      }
    }
    if (best >= 0) {
      taken[best] = 1;
      report.matched.push_back({mi, best, best_d});
    } else {
      report.unmatched_model.push_back(mi);
    }
  }
  for (int ri = 0; ri < static_cast<int>(reference.size()); ++ri)
    if (!taken[ri]) report.unmatched_reference.push_back(ri);
  return report;
}

}  // namespace corridor
