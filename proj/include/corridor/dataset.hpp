#pragma once

#include <charconv>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/geojson.hpp"
#include "corridor/kvconfig.hpp"
#include "corridor/network.hpp"
#include "corridor/stops.hpp"

namespace corridor {

struct LoadDiagnostic {
  std::string file;
  long feature_index = 0;
  std::string rule;
};

struct LayerReport {
  std::string name;
  std::string file;
  long loaded = 0;
  long dropped = 0;
  std::vector<LoadDiagnostic> diagnostics;
};

struct LoadReport {
  std::vector<LayerReport> layers;

  const LayerReport* layer(const std::string& name) const {
    for (const auto& l : layers)
      if (l.name == name) return &l;
    return nullptr;
  }
};

// All inputs assembled and validated. Optional layers may be empty; the
// stop stage rejects empty land-use/census at its own boundary.
struct CityDataset {
  NetworkGraph network;
  std::vector<LandUseZone> landuse;
  std::vector<CensusUnit> census;
  std::vector<PoiRecord> pois;
  std::vector<ElevationSample> elevation;
  BoundingBox bounds;
};

struct DatasetLoadResult {
  CityDataset dataset;
  LoadReport report;
};

namespace detail {

// Tolerant per-feature loop: malformed features are dropped with a
// diagnostic; losing more than 10% of a layer is fatal.
template <typename ParseOne>
long tolerant_layer(const Json& features, LayerReport& report, ParseOne&& parse_one) {
  const long total = static_cast<long>(features.size());
  for (long i = 0; i < total; ++i) {
    try {
      parse_one(features[i]);
      ++report.loaded;
    } catch (const Error& e) {
      ++report.dropped;
      report.diagnostics.push_back({report.file, i, e.what()});
    }
  }
  if (total > 0 && report.dropped * 10 > total) {
    std::ostringstream msg;
    msg << report.file << ": " << report.dropped << " of " << total
        << " features dropped (>10%); first problems:";
    for (std::size_t i = 0; i < report.diagnostics.size() && i < 3; ++i)
      msg << "\n  feature " << report.diagnostics[i].feature_index << ": "
          << report.diagnostics[i].rule;
    throw ValidationError(msg.str());
  }
  return total;
}

inline double require_number(const Json& props, const char* key, const std::string& where) {
  auto it = props.find(key);
  if (it == props.end() || !it->is_number())
    throw ValidationError(where + ": missing numeric property " + key);
  return it->get<double>();
}

inline std::string require_string(const Json& props, const char* key, const std::string& where) {
  auto it = props.find(key);
  if (it == props.end() || !it->is_string())
    throw ValidationError(where + ": missing string property " + key);
  return it->get<std::string>();
}

inline double parse_csv_number(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(where + ": not a number: '" + field + "'");
  return value;
}

}  // namespace detail

inline std::vector<LandUseZone> load_landuse_layer(const std::filesystem::path& path,
                                                   LayerReport& report) {
  const Json doc = geojson::parse_document(path);
  const Json& features = geojson::features_array(doc, path.string());
  std::vector<LandUseZone> zones;
  detail::tolerant_layer(features, report, [&](const Json& jf) {
    Feature f = geojson::parse_feature(jf);
    const Polygon* poly = std::get_if<Polygon>(&f.geometry);
    if (!poly) throw ValidationError("geometry is not a Polygon");
    const std::string cat = detail::require_string(f.properties, "category", "land-use");
    const auto category = parse_landuse_category(cat);
    if (!category) throw ValidationError("unknown land-use category: " + cat);
    zones.push_back({*poly, *category});
  });
  return zones;
}

inline std::vector<CensusUnit> load_census_layer(const std::filesystem::path& path,
                                                 LayerReport& report) {
  const Json doc = geojson::parse_document(path);
  const Json& features = geojson::features_array(doc, path.string());
  std::vector<CensusUnit> units;
  detail::tolerant_layer(features, report, [&](const Json& jf) {
    Feature f = geojson::parse_feature(jf);
    const Polygon* poly = std::get_if<Polygon>(&f.geometry);
    if (!poly) throw ValidationError("geometry is not a Polygon");
    const double population = detail::require_number(f.properties, "population", "census");
    if (population < 0 || population != std::floor(population))
      throw ValidationError("population must be a non-negative count");
    const double area = detail::require_number(f.properties, "area_km2", "census");
    units.emplace_back(*poly, static_cast<long long>(population), area);
  });
  return units;
}

inline std::vector<PoiRecord> load_poi_layer(const std::filesystem::path& path,
                                             LayerReport& report) {
  const Json doc = geojson::parse_document(path);
  const Json& features = geojson::features_array(doc, path.string());
  std::vector<PoiRecord> pois;
  detail::tolerant_layer(features, report, [&](const Json& jf) {
    Feature f = geojson::parse_feature(jf);
    const GeoPoint* point = std::get_if<GeoPoint>(&f.geometry);
    if (!point) throw ValidationError("geometry is not a Point");
    PoiRecord poi;
    poi.location = *point;
    poi.category = detail::require_string(f.properties, "category", "poi");
    if (auto it = f.properties.find("weight"); it != f.properties.end()) {
      if (!it->is_number()) throw ValidationError("weight must be numeric");
      poi.weight = it->get<double>();
      if (!(std::isfinite(poi.weight) && poi.weight >= 0.0))
        throw ValidationError("weight must be finite and >= 0");
    }
    pois.push_back(std::move(poi));
  });
  return pois;
}

// Tabular file: header `lat,lon,elevation_m`, one sample per line.
inline std::vector<ElevationSample> load_elevation_layer(const std::filesystem::path& path,
                                                         LayerReport& report) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty elevation file");
  if (kv::trim(line) != "lat,lon,elevation_m")
    throw ParseError(path.string() + ": expected header 'lat,lon,elevation_m'");

  std::vector<ElevationSample> samples;
  long row = 0;
  long total = 0;
  while (std::getline(in, line)) {
    const std::string stripped = kv::trim(line);
    if (stripped.empty()) continue;
    ++total;
    try {
      std::vector<std::string> fields;
      std::stringstream ss(stripped);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(kv::trim(field));
      if (fields.size() != 3) throw ParseError("expected 3 columns");
      const double lat = detail::parse_csv_number(fields[0], "lat");
      const double lon = detail::parse_csv_number(fields[1], "lon");
      const double elev = detail::parse_csv_number(fields[2], "elevation_m");
      if (!std::isfinite(elev)) throw ValidationError("elevation_m must be finite");
      samples.push_back({GeoPoint(lat, lon), elev});
      ++report.loaded;
    } catch (const Error& e) {
      ++report.dropped;
      report.diagnostics.push_back({path.string(), row, e.what()});
    }
    ++row;
  }
  if (total > 0 && report.dropped * 10 > total)
    throw ValidationError(path.string() + ": " + std::to_string(report.dropped) + " of " +
                          std::to_string(total) + " rows dropped (>10%)");
  return samples;
}

// Tolerant network load used by the dataset path: bad features drop with
// diagnostics (the strict single-file contract lives in load_network).
inline NetworkGraph load_network_layer(const std::filesystem::path& path, LayerReport& report) {
  const Json doc = geojson::parse_document(path);
  const Json& features = geojson::features_array(doc, path.string());
  std::vector<EdgeRecord> records;
  detail::tolerant_layer(features, report, [&](const Json& jf) {
    Feature f = geojson::parse_feature(jf);
    const Polyline* line = std::get_if<Polyline>(&f.geometry);
    if (!line) throw ValidationError("geometry is not a LineString");
    const double length = detail::require_number(f.properties, "length_m", "network");
    const double time = detail::require_number(f.properties, "travel_time_s", "network");
    if (!(std::isfinite(length) && length > 0.0))
      throw ValidationError("length_m must be positive");
    if (!(std::isfinite(time) && time > 0.0))
      throw ValidationError("travel_time_s must be positive");
    records.push_back({*line, length, time});
  });
  if (records.empty()) throw ValidationError(path.string() + ": empty network");
  return NetworkGraph(records);
}

// Loads every layer named by the manifest. The network layer is mandatory;
// the rest default to empty. Paths resolve relative to the manifest.
inline DatasetLoadResult load_city_dataset(const std::filesystem::path& manifest_path) {
  if (!std::filesystem::exists(manifest_path))
    throw ConfigError("manifest not found: " + manifest_path.string());
  const KvPairs pairs = kv::parse_file(manifest_path);
  const auto base = manifest_path.parent_path();

  std::optional<std::filesystem::path> network_path, landuse_path, census_path, pois_path,
      elevation_path;
  for (const auto& [key, value] : pairs) {
    const auto resolved = base / value;
    if (key == "network") network_path = resolved;
    else if (key == "landuse") landuse_path = resolved;
    else if (key == "census") census_path = resolved;
    else if (key == "pois") pois_path = resolved;
    else if (key == "elevation") elevation_path = resolved;
    else throw ConfigError(manifest_path.string() + ": unknown layer key '" + key + "'");
  }
  if (!network_path)
    throw ConfigError(manifest_path.string() + ": missing mandatory layer 'network'");

  const auto check_exists = [](const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) throw ConfigError("layer file not found: " + p.string());
    return p;
  };

  LoadReport report;
  const auto make_layer = [&](const char* name, const std::filesystem::path& p) -> LayerReport& {
    report.layers.push_back({name, p.string(), 0, 0, {}});
    return report.layers.back();
  };

  NetworkGraph network = load_network_layer(check_exists(*network_path),
                                            make_layer("network", *network_path));

  std::vector<LandUseZone> landuse;
  if (landuse_path)
    landuse = load_landuse_layer(check_exists(*landuse_path),
                                 make_layer("landuse", *landuse_path));
  std::vector<CensusUnit> census;
  if (census_path)
    census = load_census_layer(check_exists(*census_path), make_layer("census", *census_path));
  std::vector<PoiRecord> pois;
  if (pois_path)
    pois = load_poi_layer(check_exists(*pois_path), make_layer("pois", *pois_path));
  std::vector<ElevationSample> elevation;
  if (elevation_path)
    elevation = load_elevation_layer(check_exists(*elevation_path),
                                     make_layer("elevation", *elevation_path));

  BoundingBox bounds;
  for (const auto& p : network.nodes()) bounds.expand(p);
  for (const auto& e : network.edges()) bounds.expand(bounds_of(e.geometry));
  for (const auto& z : landuse) bounds.expand(bounds_of(z.geometry));
  for (const auto& u : census) bounds.expand(bounds_of(u.geometry));
  for (const auto& p : pois) bounds.expand(p.location);
  for (const auto& s : elevation) bounds.expand(s.location);

  return {CityDataset{std::move(network), std::move(landuse), std::move(census),
                      std::move(pois), std::move(elevation), bounds},
          std::move(report)};
}

// Layer serializers; reloading their output reproduces the layer exactly.

inline Json serialize_network(const NetworkGraph& g) {
  std::vector<Feature> features;
  features.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    Feature f;
    f.geometry = e.geometry;
    f.properties = Json{{"length_m", e.length_m}, {"travel_time_s", e.travel_time_s}};
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json serialize_landuse(const std::vector<LandUseZone>& zones) {
  std::vector<Feature> features;
  features.reserve(zones.size());
  for (const auto& z : zones) {
    Feature f;
    f.geometry = z.geometry;
    f.properties = Json{{"category", to_string(z.category)}};
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json serialize_census(const std::vector<CensusUnit>& units) {
  std::vector<Feature> features;
  features.reserve(units.size());
  for (const auto& u : units) {
    Feature f;
    f.geometry = u.geometry;
    f.properties = Json{{"population", u.population}, {"area_km2", u.area_km2}};
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline Json serialize_pois(const std::vector<PoiRecord>& pois) {
  std::vector<Feature> features;
  features.reserve(pois.size());
  for (const auto& p : pois) {
    Feature f;
    f.geometry = p.location;
    f.properties = Json{{"category", p.category}, {"weight", p.weight}};
    features.push_back(std::move(f));
  }
  return geojson::feature_collection_json(features);
}

inline std::string serialize_elevation_csv(const std::vector<ElevationSample>& samples) {
  std::ostringstream out;
  out << "lat,lon,elevation_m\n";
  out.precision(17);
  for (const auto& s : samples)
    out << s.location.lat << ',' << s.location.lon << ',' << s.elevation_m << '\n';
  return out.str();
}

}  // namespace corridor
