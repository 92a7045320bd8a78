#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "corridor/aco.hpp"
#include "corridor/errors.hpp"
#include "corridor/geojson.hpp"
#include "corridor/network.hpp"

namespace corridor {

// Source of candidate routes between two geographic endpoints. The graph
// engine and any external-service adapter implement the same contract, so
// the rest of the pipeline never knows where routes come from.
class RouteProvider {
 public:
  virtual ~RouteProvider() = default;

  // Up to k candidate routes, best first. Throws NoPathError when the
  // endpoints cannot be served.
  virtual std::vector<Route> candidate_routes(const GeoPoint& origin, const GeoPoint& destination,
                                              int k) const = 0;
};

// Routes straight off the loaded graph: endpoints snap to their nearest
// node (within a hard cap) and Yen's search does the rest.
class GraphRouteProvider : public RouteProvider {
 public:
  GraphRouteProvider(const NetworkGraph& graph, double w_d, double w_t,
                     double snap_cap_m = 2000.0)
      : graph_(&graph), w_d_(w_d), w_t_(w_t), snap_cap_m_(snap_cap_m) {}

  NodeId snap(const GeoPoint& p, const char* what) const {
    const NodeId id = graph_->nearest_node(p);
    const double d = haversine_distance(p, graph_->node(id));
    if (d > snap_cap_m_)
      throw ValidationError(std::string(what) + ": nearest network node is " +
                            std::to_string(d) + " m away (cap " +
                            std::to_string(snap_cap_m_) + " m)");
    return id;
  }

  std::vector<Route> candidate_routes(const GeoPoint& origin, const GeoPoint& destination,
                                      int k) const override {
    return k_candidate_routes(*graph_, snap(origin, "origin"), snap(destination, "destination"),
                              k, w_d_, w_t_);
  }

 private:
  const NetworkGraph* graph_;
  double w_d_;
  double w_t_;
  double snap_cap_m_;
};

// Canned-route provider: answers only the endpoint pairs named in its
// file, verbatim and in file order. Stands in for a live map service.
class StubRouteProvider : public RouteProvider {
 public:
  struct Entry {
    std::string name;
    GeoPoint origin;
    GeoPoint destination;
    std::vector<Route> routes;
  };

  explicit StubRouteProvider(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::vector<Route> candidate_routes(const GeoPoint& origin, const GeoPoint& destination,
                                      int k) const override {
    for (const Entry& e : entries_) {
      if (haversine_distance(e.origin, origin) <= kMatchToleranceM &&
          haversine_distance(e.destination, destination) <= kMatchToleranceM) {
        std::vector<Route> out = e.routes;
        if (static_cast<int>(out.size()) > k) out.resize(k);
        return out;
      }
    }
    throw NoPathError("no canned routes for the requested endpoint pair", -1);
  }

  const std::vector<Entry>& entries() const { return entries_; }

  static constexpr double kMatchToleranceM = 1.0;

 private:
  std::vector<Entry> entries_;
};

// Loads the canned-routes file (schema documented in the README). Every
// route is validated against the full Route invariants before acceptance.
inline StubRouteProvider load_stub_provider(const std::filesystem::path& path) {
  const Json doc = geojson::parse_document(path);
  auto pairs_it = doc.find("pairs");
  if (!doc.is_object() || pairs_it == doc.end() || !pairs_it->is_array())
    throw ParseError(path.string() + ": expected object with a 'pairs' array");

  std::vector<StubRouteProvider::Entry> entries;
  for (std::size_t pi = 0; pi < pairs_it->size(); ++pi) {
    const Json& jp = (*pairs_it)[pi];
    const std::string where = path.string() + ": pair " + std::to_string(pi);
    if (!jp.is_object()) throw ParseError(where + ": not an object");

    StubRouteProvider::Entry entry;
    entry.name = jp.value("name", "pair-" + std::to_string(pi));
    if (!jp.contains("origin") || !jp.contains("destination"))
      throw ParseError(where + ": missing origin/destination");
    entry.origin = geojson::parse_position(jp["origin"]);
    entry.destination = geojson::parse_position(jp["destination"]);

    auto routes_it = jp.find("routes");
    if (routes_it == jp.end() || !routes_it->is_array())
      throw ParseError(where + ": missing routes array");

    for (std::size_t ri = 0; ri < routes_it->size(); ++ri) {
      const Json& jr = (*routes_it)[ri];
      const std::string rwhere = where + ", route " + std::to_string(ri);
      Route route;
      std::vector<GeoPoint> node_coords;

      if (!jr.contains("nodes") || !jr["nodes"].is_array() || !jr.contains("edges") ||
          !jr["edges"].is_array())
        throw ParseError(rwhere + ": missing nodes/edges arrays");
      for (const Json& jn : jr["nodes"]) {
        if (!jn.is_object() || !jn.contains("id") || !jn.contains("lon") || !jn.contains("lat"))
          throw ParseError(rwhere + ": node entries need id/lon/lat");
        route.nodes.push_back(jn["id"].get<NodeId>());
        node_coords.push_back(GeoPoint(jn["lat"].get<double>(), jn["lon"].get<double>()));
      }
      for (const Json& je : jr["edges"]) {
        if (!je.is_object() || !je.contains("from") || !je.contains("to") ||
            !je.contains("length_m") || !je.contains("travel_time_s") ||
            !je.contains("geometry"))
          throw ParseError(rwhere + ": edge entries need from/to/length_m/travel_time_s/geometry");
        std::vector<GeoPoint> pts;
        for (const Json& c : je["geometry"]) pts.push_back(geojson::parse_position(c));
        route.edges.push_back(Edge{je["from"].get<NodeId>(), je["to"].get<NodeId>(),
                                   je["length_m"].get<double>(),
                                   je["travel_time_s"].get<double>(), Polyline(std::move(pts))});
      }
      route.total_distance_m = jr.value("total_distance_m", 0.0);
      route.total_time_s = jr.value("total_time_s", 0.0);

      // Canned node ids are file-local; remap to positions for validation.
      Route local = route;
      std::vector<GeoPoint> coords_by_local(node_coords.size());
      {
        std::unordered_map<NodeId, NodeId> remap;
        for (std::size_t i = 0; i < route.nodes.size(); ++i) {
          const auto [it, inserted] = remap.emplace(route.nodes[i], static_cast<NodeId>(i));
          if (!inserted)
            throw ValidationError(rwhere + ": repeated node " + std::to_string(route.nodes[i]));
        }
        for (std::size_t i = 0; i < route.nodes.size(); ++i) {
          coords_by_local[i] = node_coords[i];
          local.nodes[i] = static_cast<NodeId>(i);
        }
        for (auto& e : local.edges) {
          auto f = remap.find(e.from);
          auto t = remap.find(e.to);
          if (f == remap.end() || t == remap.end())
            throw ValidationError(rwhere + ": edge endpoint not in node list");
          e.from = f->second;
          e.to = t->second;
        }
      }
      try {
        validate_route(local, &coords_by_local, "canned route");
      } catch (const ValidationError& e) {
        throw ValidationError(rwhere + ": " + e.what());
      }
      entry.routes.push_back(std::move(route));
    }
    entries.push_back(std::move(entry));
  }
  return StubRouteProvider(std::move(entries));
}

}  // namespace corridor
