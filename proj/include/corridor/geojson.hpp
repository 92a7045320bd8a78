#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "corridor/errors.hpp"
#include "corridor/geo.hpp"

namespace corridor {

using Json = nlohmann::json;

// One GeoJSON feature: a typed geometry plus its properties object.
struct Feature {
  std::variant<GeoPoint, Polyline, Polygon> geometry;
  Json properties = Json::object();
};

struct FeatureCollection {
  std::vector<Feature> features;
};

namespace geojson {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json parse_document(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
}

// Validates the FeatureCollection wrapper and returns the features array.
inline const Json& features_array(const Json& doc, const std::string& source) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
    throw ParseError(source + ": not a FeatureCollection");
  auto it = doc.find("features");
  if (it == doc.end() || !it->is_array())
    throw ParseError(source + ": missing features array");
  return *it;
}

inline GeoPoint parse_position(const Json& coord) {
  if (!coord.is_array() || coord.size() < 2 || !coord[0].is_number() || !coord[1].is_number())
    throw ParseError("coordinate is not a [lon, lat] pair");
  return GeoPoint(coord[1].get<double>(), coord[0].get<double>());
}

inline std::vector<GeoPoint> parse_ring(const Json& ring) {
  if (!ring.is_array()) throw ParseError("polygon ring is not an array");
  std::vector<GeoPoint> pts;
  pts.reserve(ring.size());
  for (const auto& c : ring) pts.push_back(parse_position(c));
  return pts;
}

inline Feature parse_feature(const Json& f) {
  if (!f.is_object() || f.value("type", "") != "Feature")
    throw ParseError("not a Feature object");
  auto geom_it = f.find("geometry");
  if (geom_it == f.end() || !geom_it->is_object())
    throw ParseError("feature has no geometry object");
  const Json& geom = *geom_it;
  const std::string type = geom.value("type", "");
  auto coords_it = geom.find("coordinates");
  if (coords_it == geom.end()) throw ParseError("geometry has no coordinates");
  const Json& coords = *coords_it;

  Feature out;
  if (type == "Point") {
    out.geometry = parse_position(coords);
  } else if (type == "LineString") {
    if (!coords.is_array()) throw ParseError("LineString coordinates not an array");
    std::vector<GeoPoint> pts;
    pts.reserve(coords.size());
    for (const auto& c : coords) pts.push_back(parse_position(c));
    out.geometry = Polyline(std::move(pts));
  } else if (type == "Polygon") {
    if (!coords.is_array() || coords.empty())
      throw ParseError("Polygon coordinates empty");
    std::vector<GeoPoint> exterior = parse_ring(coords[0]);
    std::vector<std::vector<GeoPoint>> holes;
    for (std::size_t i = 1; i < coords.size(); ++i) holes.push_back(parse_ring(coords[i]));
    out.geometry = Polygon(std::move(exterior), std::move(holes));
  } else {
    throw ParseError("unsupported geometry type: " + (type.empty() ? "<missing>" : type));
  }

  auto props_it = f.find("properties");
  if (props_it != f.end() && props_it->is_object()) out.properties = *props_it;
  return out;
}

// Strict parse: the first malformed feature aborts, naming its index.
inline FeatureCollection parse_feature_collection(const Json& doc, const std::string& source) {
  FeatureCollection fc;
  const Json& arr = features_array(doc, source);
  fc.features.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    try {
      fc.features.push_back(parse_feature(arr[i]));
    } catch (const Error& e) {
      throw ParseError(source + ": feature " + std::to_string(i) + ": " + e.what());
    }
  }
  return fc;
}

inline FeatureCollection read_feature_collection(const std::filesystem::path& path) {
  return parse_feature_collection(parse_document(path), path.string());
}

inline Json position_json(const GeoPoint& p) { return Json::array({p.lon, p.lat}); }

inline Json geometry_json(const GeoPoint& p) {
  return Json{{"type", "Point"}, {"coordinates", position_json(p)}};
}

inline Json geometry_json(const Polyline& line) {
  Json coords = Json::array();
  for (const auto& p : line.points()) coords.push_back(position_json(p));
  return Json{{"type", "LineString"}, {"coordinates", coords}};
}

inline Json geometry_json(const Polygon& poly) {
  Json rings = Json::array();
  Json exterior = Json::array();
  for (const auto& p : poly.exterior()) exterior.push_back(position_json(p));
  rings.push_back(exterior);
  for (const auto& hole : poly.holes()) {
    Json ring = Json::array();
    for (const auto& p : hole) ring.push_back(position_json(p));
    rings.push_back(ring);
  }
  return Json{{"type", "Polygon"}, {"coordinates", rings}};
}

inline Json feature_json(const Feature& f) {
  Json geom = std::visit([](const auto& g) { return geometry_json(g); }, f.geometry);
  return Json{{"type", "Feature"}, {"geometry", geom}, {"properties", f.properties}};
}

inline Json feature_collection_json(const std::vector<Feature>& features) {
  Json arr = Json::array();
  for (const auto& f : features) arr.push_back(feature_json(f));
  return Json{{"type", "FeatureCollection"}, {"features", arr}};
}

inline void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace geojson
}  // namespace corridor
