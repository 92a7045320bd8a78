#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "corridor/aco.hpp"
#include "corridor/dataset.hpp"
#include "corridor/errors.hpp"
#include "corridor/geojson.hpp"
#include "corridor/kvconfig.hpp"
#include "corridor/network.hpp"
#include "corridor/stops.hpp"

namespace corridor {

// Resolved run parameters. Assembled from defaults, then the config file,
// then command-line overrides (flags win).
struct RunConfig {
  std::filesystem::path manifest;
  std::string origin;  // node id, or "lat,lon" snapped to the nearest node
  std::string dest;
  int k = 4;
  std::filesystem::path out_dir = "out";
  double snap_cap_m = 2000.0;
  AcoParams aco;
  StopRules stops;
};

namespace config {

inline double to_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return out;
}

inline long long to_int(const std::string& v, const std::string& key) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  return out;
}

inline std::set<LandUseCategory> to_landuse_set(const std::string& v, const std::string& key) {
  std::set<LandUseCategory> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string name = kv::trim(item);
    if (name.empty()) continue;
    const auto cat = parse_landuse_category(name);
    if (!cat) throw ConfigError("config key '" + key + "': unknown category '" + name + "'");
    out.insert(*cat);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty category list");
  return out;
}

// One assignment, dotted keys included. Unknown keys are rejected so typos
// cannot silently fall back to defaults.
inline void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "manifest") cfg.manifest = value;
  else if (key == "origin") cfg.origin = value;
  else if (key == "dest") cfg.dest = value;
  else if (key == "k") cfg.k = static_cast<int>(to_int(value, key));
  else if (key == "seed") cfg.aco.seed = static_cast<std::uint64_t>(to_int(value, key));
  else if (key == "out") cfg.out_dir = value;
  else if (key == "snap_cap_m") cfg.snap_cap_m = to_double(value, key);
  else if (key == "aco.alpha") cfg.aco.alpha = to_double(value, key);
  else if (key == "aco.beta") cfg.aco.beta = to_double(value, key);
  else if (key == "aco.rho") cfg.aco.rho = to_double(value, key);
  else if (key == "aco.q") cfg.aco.q = to_double(value, key);
  else if (key == "aco.n_ants") cfg.aco.n_ants = static_cast<int>(to_int(value, key));
  else if (key == "aco.n_iterations")
    cfg.aco.n_iterations = static_cast<int>(to_int(value, key));
  else if (key == "aco.w_d") cfg.aco.w_d = to_double(value, key);
  else if (key == "aco.w_t") cfg.aco.w_t = to_double(value, key);
  else if (key == "aco.tau_min") cfg.aco.tau_min = to_double(value, key);
  else if (key == "aco.tau_max") cfg.aco.tau_max = to_double(value, key);
  else if (key == "aco.seed") cfg.aco.seed = static_cast<std::uint64_t>(to_int(value, key));
  else if (key == "stops.min_density") cfg.stops.min_density = to_double(value, key);
  else if (key == "stops.poi_radius_m") cfg.stops.poi_radius_m = to_double(value, key);
  else if (key == "stops.min_poi_weight") cfg.stops.min_poi_weight = to_double(value, key);
  else if (key == "stops.allowed_landuse")
    cfg.stops.allowed_landuse = to_landuse_set(value, key);
  else if (key == "stops.max_slope_gate") cfg.stops.max_slope_gate = to_double(value, key);
  else if (key == "stops.grid_cell_m") cfg.stops.grid_cell_m = to_double(value, key);
  else if (key == "stops.corridor_radius_m")
    cfg.stops.corridor_radius_m = to_double(value, key);
  else if (key == "stops.min_spacing_m") cfg.stops.min_spacing_m = to_double(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

// Relative manifest paths in a config file resolve against the file itself.
inline void apply_file(RunConfig& cfg, const std::filesystem::path& path) {
  bool sets_manifest = false;
  for (const auto& [key, value] : kv::parse_file(path)) {
    apply(cfg, key, value);
    if (key == "manifest") sets_manifest = true;
  }
  if (sets_manifest && cfg.manifest.is_relative())
    cfg.manifest = path.parent_path() / cfg.manifest;
}

}  // namespace config

// "N" picks node N; "lat,lon" snaps to the nearest node within the cap.
inline NodeId resolve_endpoint(const NetworkGraph& g, const std::string& spec,
                               double snap_cap_m, const char* what) {
  if (spec.empty()) throw ConfigError(std::string(what) + " not specified");
  if (spec.find(',') != std::string::npos) {
    const auto comma = spec.find(',');
    const double lat = config::to_double(kv::trim(spec.substr(0, comma)), what);
    const double lon = config::to_double(kv::trim(spec.substr(comma + 1)), what);
    const GeoPoint p(lat, lon);
    const NodeId id = g.nearest_node(p);
    const double d = haversine_distance(p, g.node(id));
    if (d > snap_cap_m)
      throw ValidationError(std::string(what) + ": nearest network node is " +
                            std::to_string(d) + " m away (cap " + std::to_string(snap_cap_m) +
                            " m); refusing to guess");
    return id;
  }
  const long long id = config::to_int(spec, what);
  if (id < 0) throw ConfigError(std::string(what) + ": negative node id");
  g.check_node(static_cast<NodeId>(id), what);
  return static_cast<NodeId>(id);
}

// ---- Artifact serialization -------------------------------------------

inline Json route_properties(const Route& r, double w_d, double w_t) {
  return Json{{"total_distance_m", r.total_distance_m},
              {"total_time_s", r.total_time_s},
              {"cost", route_cost(r, w_d, w_t)},
              {"nodes", r.nodes}};
}

inline Json routes_feature_collection(const std::vector<Route>& routes, double w_d, double w_t) {
  std::vector<Feature> features;
  features.reserve(routes.size());
  for (std::size_t i = 0; i < routes.size(); ++i) {
    Feature f;
    f.geometry = routes[i].geometry();
    f.properties = route_properties(routes[i], w_d, w_t);
    f.properties["rank"] = i;
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json stop_properties(const CandidateStop& s) {
  return Json{{"score", s.score},
              {"density", s.evidence.density},
              {"poi_weight", s.evidence.poi_weight},
              {"landuse", to_string(s.evidence.landuse)},
              {"elevation_spread_m", s.evidence.elevation_spread_m},
              {"elevation_vacuous", s.evidence.elevation_vacuous}};
}

inline Json citywide_stops_feature_collection(const std::vector<CandidateStop>& stops) {
  std::vector<Feature> features;
  features.reserve(stops.size());
  for (std::size_t i = 0; i < stops.size(); ++i) {
    Feature f;
    f.geometry = stops[i].location;
    f.properties = stop_properties(stops[i]);
    f.properties["rank"] = i;
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json route_stops_feature_collection(const std::vector<CandidateStop>& stops,
                                           const Route& route) {
  std::vector<Feature> features;
  features.reserve(stops.size());
  for (std::size_t i = 0; i < stops.size(); ++i) {
    Feature f;
    f.geometry = stops[i].location;
    f.properties = stop_properties(stops[i]);
    f.properties["seq"] = i;
    f.properties["along_m"] = along_route_position(route, stops[i].location);
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json final_feature_collection(const Route& route, const std::vector<CandidateStop>& stops,
                                     const GeoPoint& origin, const GeoPoint& dest, double w_d,
                                     double w_t) {
  std::vector<Feature> features;
  Feature rf;
  rf.geometry = route.geometry();
  rf.properties = route_properties(route, w_d, w_t);
  rf.properties["role"] = "route";
  features.push_back(std::move(rf));

  Feature of;
  of.geometry = origin;
  of.properties = Json{{"role", "terminus"}, {"end", "origin"}};
  features.push_back(std::move(of));

  for (std::size_t i = 0; i < stops.size(); ++i) {
    Feature sf;
    sf.geometry = stops[i].location;
    sf.properties = stop_properties(stops[i]);
    sf.properties["role"] = "stop";
    sf.properties["seq"] = i;
    features.push_back(std::move(sf));
  }

  Feature df;
  df.geometry = dest;
  df.properties = Json{{"role", "terminus"}, {"end", "destination"}};
  features.push_back(std::move(df));

  return geojson::feature_collection_json(features);
}

inline Json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// Field names here are the documented factor-report contract.
inline Json optimization_report_json(const OptimizationResult& r) {
  Json per_iteration = Json::array();
  for (const auto& t : r.per_iteration) {
    per_iteration.push_back(Json{
        {"iteration", t.iteration},
        {"best_so_far_cost", finite_or_null(t.best_so_far_cost)},
        {"iteration_best_cost",
         t.iteration_best_cost ? finite_or_null(*t.iteration_best_cost) : Json(nullptr)}});
  }
  return Json{
      {"best_route",
       {{"nodes", r.best_route.nodes},
        {"total_distance_m", r.best_route.total_distance_m},
        {"total_time_s", r.best_route.total_time_s}}},
      {"best_cost", r.best_cost},
      {"factors",
       {{"total_distance_m", r.factors.total_distance_m},
        {"total_time_s", r.factors.total_time_s},
        {"w_d", r.factors.w_d},
        {"w_t", r.factors.w_t},
        {"distance_cost", r.factors.distance_cost},
        {"time_cost", r.factors.time_cost}}},
      {"per_iteration", per_iteration},
      {"candidate_comparison", r.candidate_costs},
      {"seed", r.seed},
      {"ants",
       {{"launched", r.ants_launched},
        {"completed", r.ants_completed},
        {"abandoned", r.ants_abandoned}}}};
}

inline Json variation_report_json(const VariationReport& rep) {
  Json matched = Json::array();
  for (const auto& m : rep.matched)
    matched.push_back(Json{{"model_index", m.model_index},
                           {"reference_index", m.reference_index},
                           {"distance_m", m.distance_m}});
  return Json{{"model_count", rep.model_count},
              {"reference_count", rep.reference_count},
              {"count_delta", rep.count_delta},
              {"matched", matched},
              {"unmatched_model", rep.unmatched_model},
              {"unmatched_reference", rep.unmatched_reference}};
}

// ---- Pipeline stages ----------------------------------------------------

struct PlanOutputs {
  NodeId origin = 0;
  NodeId dest = 0;
  std::vector<Route> candidates;
  OptimizationResult result;
  std::vector<CandidateStop> citywide;
  std::vector<CandidateStop> route_stops;
};

inline std::pair<NodeId, NodeId> resolve_endpoints(const CityDataset& ds,
                                                   const RunConfig& cfg) {
  return {resolve_endpoint(ds.network, cfg.origin, cfg.snap_cap_m, "origin"),
          resolve_endpoint(ds.network, cfg.dest, cfg.snap_cap_m, "destination")};
}

inline std::vector<Route> run_candidates(const CityDataset& ds, const RunConfig& cfg) {
  const auto [origin, dest] = resolve_endpoints(ds, cfg);
  return k_candidate_routes(ds.network, origin, dest, cfg.k, cfg.aco.w_d, cfg.aco.w_t);
}

inline std::vector<CandidateStop> run_citywide_stops(const CityDataset& ds,
                                                     const RunConfig& cfg) {
  return score_candidates(ds.landuse, ds.census, ds.pois, ds.elevation, cfg.stops);
}

// Full pipeline: candidates, metaheuristic selection, citywide stops,
// route-stop integration.
inline PlanOutputs run_plan(const CityDataset& ds, const RunConfig& cfg) {
  PlanOutputs out;
  std::tie(out.origin, out.dest) = resolve_endpoints(ds, cfg);
  out.candidates =
      k_candidate_routes(ds.network, out.origin, out.dest, cfg.k, cfg.aco.w_d, cfg.aco.w_t);
  out.result = optimize(ds.network, out.origin, out.dest, cfg.aco);
  out.result.candidate_costs.clear();
  for (const Route& r : out.candidates)
    out.result.candidate_costs.push_back(route_cost(r, cfg.aco.w_d, cfg.aco.w_t));
  out.citywide = run_citywide_stops(ds, cfg);
  out.route_stops = select_route_stops(out.result.best_route, out.citywide, cfg.stops);
  return out;
}

// ---- Output files --------------------------------------------------------

using NamedArtifact = std::pair<std::string, std::string>;  // filename, content

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// Writes every artifact into dir, or nothing: files already written are
// removed if any write fails.
inline void write_artifacts(const std::filesystem::path& dir,
                            const std::vector<NamedArtifact>& artifacts) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& [name, content] : artifacts) {
      const auto path = dir / name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + path.string());
      written.push_back(path);
      out << content;
      out.flush();
      if (!out) throw Error("write failed: " + path.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
}

inline std::vector<NamedArtifact> plan_artifacts(const PlanOutputs& out, const CityDataset& ds,
                                                 const RunConfig& cfg) {
  const double w_d = cfg.aco.w_d, w_t = cfg.aco.w_t;
  return {
      {"candidates.geojson", dump_json(routes_feature_collection(out.candidates, w_d, w_t))},
      {"optimal.geojson",
       dump_json(routes_feature_collection({out.result.best_route}, w_d, w_t))},
      {"factors.json", dump_json(optimization_report_json(out.result))},
      {"stops.geojson",
       dump_json(route_stops_feature_collection(out.route_stops, out.result.best_route))},
      {"final.geojson",
       dump_json(final_feature_collection(out.result.best_route, out.route_stops,
                                          ds.network.node(out.origin),
                                          ds.network.node(out.dest), w_d, w_t))},
  };
}

// Reference stop list: a feature collection of Points.
inline std::vector<GeoPoint> load_reference_stops(const std::filesystem::path& path) {
  const FeatureCollection fc = geojson::read_feature_collection(path);
  std::vector<GeoPoint> out;
  out.reserve(fc.features.size());
  for (std::size_t i = 0; i < fc.features.size(); ++i) {
    const GeoPoint* p = std::get_if<GeoPoint>(&fc.features[i].geometry);
    if (!p)
      throw ValidationError(path.string() + ": feature " + std::to_string(i) +
                            " is not a Point");
    out.push_back(*p);
  }
  return out;
}

}  // namespace corridor
