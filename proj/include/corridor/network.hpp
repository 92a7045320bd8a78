#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/geo.hpp"
#include "corridor/geojson.hpp"

namespace corridor {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

// Directed corridor segment. length_m and travel_time_s come from the input
// file and take precedence over anything recomputed from the geometry.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  double length_m = 0.0;
  double travel_time_s = 0.0;
  Polyline geometry;

  bool operator==(const Edge&) const = default;
};

// Loopless node/edge path with aggregate distance and time. Edges are owned
// copies so a Route stays valid without the graph it came from.
struct Route {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  double total_distance_m = 0.0;
  double total_time_s = 0.0;

  bool operator==(const Route&) const = default;

  // Concatenated edge geometry; joins that repeat a point exactly are fused.
  Polyline geometry() const {
    std::vector<GeoPoint> pts;
    for (const Edge& e : edges) {
      for (const GeoPoint& p : e.geometry.points()) {
        if (!pts.empty() && pts.back() == p) continue;
        pts.push_back(p);
      }
    }
    return Polyline(std::move(pts));
  }
};

// Checks the documented Route invariants; node_coords, when given, also
// verifies that edge geometry endpoints sit on their nodes (within 1 m).
inline void validate_route(const Route& r, const std::vector<GeoPoint>* node_coords = nullptr,
                           const std::string& context = "route") {
  if (r.nodes.size() < 2 || r.edges.size() != r.nodes.size() - 1)
    throw ValidationError(context + ": node/edge sequences inconsistent");
  std::set<NodeId> seen;
  for (NodeId n : r.nodes)
    if (!seen.insert(n).second)
      throw ValidationError(context + ": repeated node " + std::to_string(n));
  double dist = 0.0, time = 0.0;
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const Edge& e = r.edges[i];
    if (e.from != r.nodes[i] || e.to != r.nodes[i + 1])
      throw ValidationError(context + ": edge " + std::to_string(i) + " does not connect node " +
                            std::to_string(i) + " to node " + std::to_string(i + 1));
    if (!(std::isfinite(e.length_m) && e.length_m > 0.0))
      throw ValidationError(context + ": edge " + std::to_string(i) + " has non-positive length");
    if (!(std::isfinite(e.travel_time_s) && e.travel_time_s > 0.0))
      throw ValidationError(context + ": edge " + std::to_string(i) + " has non-positive time");
    dist += e.length_m;
    time += e.travel_time_s;
    if (node_coords) {
      if (haversine_distance(e.geometry.front(), (*node_coords)[e.from]) > 1.0 ||
          haversine_distance(e.geometry.back(), (*node_coords)[e.to]) > 1.0)
        throw ValidationError(context + ": edge " + std::to_string(i) +
                              " geometry endpoints are off their nodes");
    }
  }
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-6 * std::max({std::abs(a), std::abs(b), 1.0});
  };
  if (!close(dist, r.total_distance_m) || !close(time, r.total_time_s))
    throw ValidationError(context + ": totals do not match edge sums");
}

// Raw edge input to the graph builder.
struct EdgeRecord {
  Polyline geometry;
  double length_m;
  double travel_time_s;
};

struct BuildStats {
  long merged_parallel_edges = 0;
  long dropped_self_loops = 0;
};

// Immutable directed graph. Node identities are dense indices assigned in
// first-appearance order; endpoints within 1 m snap to the same node.
class NetworkGraph {
 public:
  explicit NetworkGraph(const std::vector<EdgeRecord>& records) {
    if (records.empty()) throw ValidationError("network: no edges");

    for (const EdgeRecord& rec : records) {
      const NodeId a = find_or_add_node(rec.geometry.front());
      const NodeId b = find_or_add_node(rec.geometry.back());
      if (a == b) {
        ++stats_.dropped_self_loops;
        continue;
      }
      Edge e{a, b, rec.length_m, rec.travel_time_s, rec.geometry};
      const auto key = pair_key(a, b);
      auto it = edge_by_pair_.find(key);
      if (it == edge_by_pair_.end()) {
        edge_by_pair_.emplace(key, static_cast<EdgeId>(edges_.size()));
        edges_.push_back(std::move(e));
      } else {
        // Parallel directed edges merge to the minimum combined cost
        // (unit weights); ties keep the first-loaded edge.
        Edge& existing = edges_[it->second];
        if (e.length_m + e.travel_time_s < existing.length_m + existing.travel_time_s)
          existing = std::move(e);
        ++stats_.merged_parallel_edges;
      }
    }
    if (edges_.empty()) throw ValidationError("network: empty after load");
    finish_build();
  }

  // Programmatic construction with explicit node identities; no snapping.
  NetworkGraph(std::vector<GeoPoint> nodes, std::vector<Edge> edges)
      : node_coords_(std::move(nodes)), edges_(std::move(edges)) {
    if (node_coords_.empty() || edges_.empty())
      throw ValidationError("network: empty");
    for (EdgeId i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.from >= node_coords_.size() || e.to >= node_coords_.size())
        throw ValidationError("network: edge " + std::to_string(i) + " endpoint out of range");
      if (e.from == e.to)
        throw ValidationError("network: edge " + std::to_string(i) + " is a self-loop");
      if (!(std::isfinite(e.length_m) && e.length_m > 0.0) ||
          !(std::isfinite(e.travel_time_s) && e.travel_time_s > 0.0))
        throw ValidationError("network: edge " + std::to_string(i) + " has non-positive cost");
      if (haversine_distance(e.geometry.front(), node_coords_[e.from]) > 1.0 ||
          haversine_distance(e.geometry.back(), node_coords_[e.to]) > 1.0)
        throw ValidationError("network: edge " + std::to_string(i) +
                              " geometry endpoints are off their nodes");
      if (!edge_by_pair_.emplace(pair_key(e.from, e.to), i).second)
        throw ValidationError("network: duplicate directed edge " + std::to_string(e.from) +
                              "->" + std::to_string(e.to));
    }
    finish_build();
  }

  std::size_t node_count() const { return node_coords_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const GeoPoint& node(NodeId id) const { return node_coords_[id]; }
  const std::vector<GeoPoint>& nodes() const { return node_coords_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const EdgeId> out_edges(NodeId id) const { return out_edges_[id]; }
  int component(NodeId id) const { return components_[id]; }
  int component_count() const { return component_count_; }
  const BuildStats& build_stats() const { return stats_; }

  std::optional<EdgeId> find_edge(NodeId from, NodeId to) const {
    auto it = edge_by_pair_.find(pair_key(from, to));
    if (it == edge_by_pair_.end()) return std::nullopt;
    return it->second;
  }

  void check_node(NodeId id, const char* what) const {
    if (id >= node_coords_.size())
      throw ValidationError(std::string(what) + " node " + std::to_string(id) +
                            " not in graph (" + std::to_string(node_coords_.size()) + " nodes)");
  }

  // Nearest node by great-circle distance; ties go to the smaller id.
  NodeId nearest_node(const GeoPoint& p) const {
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId i = 0; i < node_coords_.size(); ++i) {
      const double d = haversine_distance(p, node_coords_[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  // ~4 m of latitude per cell; 1 m neighbors always land in the 3x3
  // neighborhood for |lat| < 75 deg.
  static constexpr double kCellDeg = 3.6e-5;

  static std::uint64_t cell_key(const GeoPoint& p) {
    const auto ci = static_cast<std::int32_t>(std::floor(p.lat / kCellDeg));
    const auto cj = static_cast<std::int32_t>(std::floor(p.lon / kCellDeg));
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ci)) << 32) |
           static_cast<std::uint32_t>(cj);
  }

  NodeId find_or_add_node(const GeoPoint& p) {
    const auto ci = static_cast<std::int32_t>(std::floor(p.lat / kCellDeg));
    const auto cj = static_cast<std::int32_t>(std::floor(p.lon / kCellDeg));
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ci + di)) << 32) |
            static_cast<std::uint32_t>(cj + dj);
        auto it = cells_.find(key);
        if (it == cells_.end()) continue;
        for (NodeId id : it->second) {
          const double d = haversine_distance(p, node_coords_[id]);
          if (d <= 1.0 && (d < best_d || (d == best_d && found && id < best))) {
            best_d = d;
            best = id;
            found = true;
          }
        }
      }
    }
    if (found) return best;
    const NodeId id = static_cast<NodeId>(node_coords_.size());
    node_coords_.push_back(p);
    cells_[cell_key(p)].push_back(id);
    return id;
  }

  void finish_build() {
    out_edges_.assign(node_coords_.size(), {});
    for (EdgeId i = 0; i < edges_.size(); ++i) out_edges_[edges_[i].from].push_back(i);
    for (auto& out : out_edges_)
      std::sort(out.begin(), out.end(),
                [this](EdgeId a, EdgeId b) { return edges_[a].to < edges_[b].to; });
    compute_components();
  }

  void compute_components() {
    components_.assign(node_coords_.size(), -1);
    std::vector<std::vector<NodeId>> undirected(node_coords_.size());
    for (const Edge& e : edges_) {
      undirected[e.from].push_back(e.to);
      undirected[e.to].push_back(e.from);
    }
    component_count_ = 0;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < node_coords_.size(); ++start) {
      if (components_[start] != -1) continue;
      const int comp = component_count_++;
      stack.push_back(start);
      components_[start] = comp;
      while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        for (NodeId m : undirected[n]) {
          if (components_[m] == -1) {
            components_[m] = comp;
            stack.push_back(m);
          }
        }
      }
    }
  }

  std::vector<GeoPoint> node_coords_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_edges_;
  std::vector<int> components_;
  int component_count_ = 0;
  std::unordered_map<std::uint64_t, EdgeId> edge_by_pair_;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> cells_;
  BuildStats stats_;
};

// Parses a feature-collection file of directed LineString edges. Each
// feature must carry numeric properties `length_m` and `travel_time_s`,
// both strictly positive. Any malformed feature aborts the load.
inline NetworkGraph load_network(const std::filesystem::path& path) {
  const Json doc = geojson::parse_document(path);
  const Json& features = geojson::features_array(doc, path.string());
  std::vector<EdgeRecord> records;
  records.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = path.string() + ": feature " + std::to_string(i);
    Feature f;
    try {
      f = geojson::parse_feature(features[i]);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
    const Polyline* line = std::get_if<Polyline>(&f.geometry);
    if (!line) throw ParseError(where + ": geometry is not a LineString");
    const auto read_positive = [&](const char* prop) {
      auto it = f.properties.find(prop);
      if (it == f.properties.end() || !it->is_number())
        throw ValidationError(where + ": missing numeric property " + prop);
      const double v = it->get<double>();
      if (!(std::isfinite(v) && v > 0.0))
        throw ValidationError(where + ": property " + prop + " must be positive");
      return v;
    };
    records.push_back({*line, read_positive("length_m"), read_positive("travel_time_s")});
  }
  if (records.empty()) throw ValidationError(path.string() + ": empty network");
  return NetworkGraph(records);
}

namespace detail {

struct SearchPath {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

struct Label {
  double cost = std::numeric_limits<double>::infinity();
  double dist_m = 0.0;
  double time_s = 0.0;
  EdgeId parent = kNoEdge;
  bool settled = false;
};

inline std::vector<NodeId> walk_back(const NetworkGraph& g, const std::vector<Label>& labels,
                                     NodeId origin, NodeId x) {
  std::vector<NodeId> nodes{x};
  while (x != origin) {
    const Edge& e = g.edge(labels[x].parent);
    x = e.from;
    nodes.push_back(x);
  }
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

// Label-setting search minimizing w_d*distance + w_t*time. Cost ties break
// to the lexicographically smaller node sequence; with strictly positive
// edge costs every equal-cost contender relaxes a node before it settles,
// so the tie-break is globally consistent.
inline std::optional<SearchPath> dijkstra(const NetworkGraph& g, NodeId origin, NodeId dest,
                                          double w_d, double w_t,
                                          const std::vector<char>* banned_nodes = nullptr,
                                          const std::vector<char>* banned_edges = nullptr) {
  std::vector<Label> labels(g.node_count());
  labels[origin].cost = 0.0;

  using QueueItem = std::pair<double, NodeId>;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
  queue.emplace(0.0, origin);

  while (!queue.empty()) {
    const auto [cost, u] = queue.top();
    queue.pop();
    if (labels[u].settled || cost > labels[u].cost) continue;
    labels[u].settled = true;
    if (u == dest) break;

    for (EdgeId eid : g.out_edges(u)) {
      if (banned_edges && (*banned_edges)[eid]) continue;
      const Edge& e = g.edge(eid);
      const NodeId v = e.to;
      if (banned_nodes && (*banned_nodes)[v]) continue;
      if (labels[v].settled) continue;
      const double dist = labels[u].dist_m + e.length_m;
      const double time = labels[u].time_s + e.travel_time_s;
      const double new_cost = w_d * dist + w_t * time;
      if (new_cost < labels[v].cost) {
        labels[v] = {new_cost, dist, time, eid, false};
        queue.emplace(new_cost, v);
      } else if (new_cost == labels[v].cost) {
        std::vector<NodeId> incumbent = walk_back(g, labels, origin, v);
        std::vector<NodeId> candidate = walk_back(g, labels, origin, u);
        candidate.push_back(v);
        if (std::lexicographical_compare(candidate.begin(), candidate.end(),
                                         incumbent.begin(), incumbent.end()))
          labels[v] = {new_cost, dist, time, eid, false};
      }
    }
  }

  if (!labels[dest].settled) return std::nullopt;
  SearchPath path;
  path.nodes = walk_back(g, labels, origin, dest);
  path.edges.reserve(path.nodes.size() - 1);
  NodeId x = dest;
  while (x != origin) {
    const EdgeId eid = labels[x].parent;
    path.edges.push_back(eid);
    x = g.edge(eid).from;
  }
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

// Totals are left folds over the edge sequence so that equal node sequences
// always produce bit-identical costs.
inline Route make_route(const NetworkGraph& g, const SearchPath& path) {
  Route r;
  r.nodes = path.nodes;
  r.edges.reserve(path.edges.size());
  for (EdgeId eid : path.edges) {
    const Edge& e = g.edge(eid);
    r.total_distance_m += e.length_m;
    r.total_time_s += e.travel_time_s;
    r.edges.push_back(e);
  }
  return r;
}

inline double path_cost(const NetworkGraph& g, const SearchPath& path, double w_d, double w_t) {
  double dist = 0.0, time = 0.0;
  for (EdgeId eid : path.edges) {
    dist += g.edge(eid).length_m;
    time += g.edge(eid).travel_time_s;
  }
  return w_d * dist + w_t * time;
}

inline void check_endpoints_and_weights(const NetworkGraph& g, NodeId origin, NodeId dest,
                                        double w_d, double w_t) {
  g.check_node(origin, "origin");
  g.check_node(dest, "destination");
  if (origin == dest) throw ValidationError("origin equals destination");
  if (!(std::isfinite(w_d) && w_d >= 0.0) || !(std::isfinite(w_t) && w_t >= 0.0))
    throw ValidationError("weights must be finite and non-negative");
  if (w_d == 0.0 && w_t == 0.0) throw ValidationError("weights must not both be zero");
}

[[noreturn]] inline void throw_no_path(const NetworkGraph& g, NodeId origin, NodeId dest) {
  throw NoPathError("no path from node " + std::to_string(origin) + " to node " +
                        std::to_string(dest) + " (origin component " +
                        std::to_string(g.component(origin)) + ")",
                    g.component(origin));
}

}  // namespace detail

// Exact minimum of w_d*total_distance_m + w_t*total_time_s.
inline Route shortest_path(const NetworkGraph& g, NodeId origin, NodeId dest, double w_d,
                           double w_t) {
  detail::check_endpoints_and_weights(g, origin, dest, w_d, w_t);
  auto path = detail::dijkstra(g, origin, dest, w_d, w_t);
  if (!path) detail::throw_no_path(g, origin, dest);
  return detail::make_route(g, *path);
}

// Yen's deviation search: the k cheapest loopless paths in nondecreasing
// cost order, equal costs ordered by node sequence. Returns fewer than k
// when the graph runs out of loopless paths.
inline std::vector<Route> k_candidate_routes(const NetworkGraph& g, NodeId origin, NodeId dest,
                                             int k, double w_d, double w_t) {
  detail::check_endpoints_and_weights(g, origin, dest, w_d, w_t);
  if (k < 1) throw ValidationError("k must be >= 1");

  struct Candidate {
    double cost;
    detail::SearchPath path;
  };
  struct CandidateLess {
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.path.nodes < b.path.nodes;
    }
  };

  auto first = detail::dijkstra(g, origin, dest, w_d, w_t);
  if (!first) detail::throw_no_path(g, origin, dest);

  std::vector<detail::SearchPath> accepted{std::move(*first)};
  std::set<std::vector<NodeId>> accepted_nodes{accepted[0].nodes};
  std::set<Candidate, CandidateLess> tentative;

  while (static_cast<int>(accepted.size()) < k) {
    const detail::SearchPath& prev = accepted.back();

    std::vector<char> banned_nodes(g.node_count(), 0);
    std::vector<char> banned_edges(g.edge_count(), 0);

    detail::SearchPath root;
    for (std::size_t spur_idx = 0; spur_idx + 1 < prev.nodes.size(); ++spur_idx) {
      const NodeId spur_node = prev.nodes[spur_idx];

      // Ban the continuation of every accepted path sharing this root.
      banned_edges.assign(g.edge_count(), 0);
      for (const detail::SearchPath& p : accepted) {
        if (p.nodes.size() <= spur_idx + 1) continue;
        if (std::equal(root.nodes.begin(), root.nodes.end(), p.nodes.begin(),
                       p.nodes.begin() + spur_idx) &&
            p.nodes[spur_idx] == spur_node)
          banned_edges[p.edges[spur_idx]] = 1;
      }

      auto spur = detail::dijkstra(g, spur_node, dest, w_d, w_t, &banned_nodes, &banned_edges);
      if (spur) {
        detail::SearchPath joined;
        joined.nodes = root.nodes;
        joined.nodes.insert(joined.nodes.end(), spur->nodes.begin(), spur->nodes.end());
        joined.edges = root.edges;
        joined.edges.insert(joined.edges.end(), spur->edges.begin(), spur->edges.end());
        if (!accepted_nodes.contains(joined.nodes)) {
          const double cost = detail::path_cost(g, joined, w_d, w_t);
          tentative.insert({cost, std::move(joined)});
        }
      }

      // Deviations at later spur indices must not revisit the root.
      banned_nodes[spur_node] = 1;
      root.nodes.push_back(spur_node);
      root.edges.push_back(prev.edges[spur_idx]);
    }

    if (tentative.empty()) break;
    auto next = tentative.begin();
    accepted_nodes.insert(next->path.nodes);
    accepted.push_back(next->path);
    tentative.erase(next);
  }

  std::vector<Route> routes;
  routes.reserve(accepted.size());
  for (const auto& p : accepted) routes.push_back(detail::make_route(g, p));
  return routes;
}

}  // namespace corridor
