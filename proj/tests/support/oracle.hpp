#pragma once

// Test-side oracles, kept independent of the library's search code: an
// exhaustive loopless-path enumerator and a seeded random-graph generator.
// Costs are left folds in path order with the same scalarization as
// route_cost, so agreement with the implementation is exact, not approximate.

#include <algorithm>
#include <random>
#include <vector>

#include "corridor/network.hpp"

namespace testsupport {

using corridor::Edge;
using corridor::EdgeId;
using corridor::GeoPoint;
using corridor::NetworkGraph;
using corridor::NodeId;
using corridor::Polyline;

struct EnumeratedPath {
  std::vector<NodeId> nodes;
  double total_distance_m = 0.0;
  double total_time_s = 0.0;
  double cost = 0.0;
};

namespace detail {

inline void dfs_paths(const NetworkGraph& g, NodeId current, NodeId dest, double w_d, double w_t,
                      std::vector<NodeId>& stack, std::vector<char>& visited,
                      std::vector<double>& dist_stack, std::vector<double>& time_stack,
                      std::vector<EnumeratedPath>& out) {
  if (current == dest) {
    EnumeratedPath p;
    p.nodes = stack;
    p.total_distance_m = dist_stack.back();
    p.total_time_s = time_stack.back();
    p.cost = w_d * p.total_distance_m + w_t * p.total_time_s;
    out.push_back(std::move(p));
    return;
  }
  for (EdgeId eid : g.out_edges(current)) {
    const Edge& e = g.edge(eid);
    if (visited[e.to]) continue;
    visited[e.to] = 1;
    stack.push_back(e.to);
    dist_stack.push_back(dist_stack.back() + e.length_m);
    time_stack.push_back(time_stack.back() + e.travel_time_s);
    dfs_paths(g, e.to, dest, w_d, w_t, stack, visited, dist_stack, time_stack, out);
    time_stack.pop_back();
    dist_stack.pop_back();
    stack.pop_back();
    visited[e.to] = 0;
  }
}

}  // namespace detail

// Every loopless path origin -> dest.
inline std::vector<EnumeratedPath> enumerate_paths(const NetworkGraph& g, NodeId origin,
                                                   NodeId dest, double w_d, double w_t) {
  std::vector<EnumeratedPath> out;
  std::vector<NodeId> stack{origin};
  std::vector<char> visited(g.node_count(), 0);
  visited[origin] = 1;
  std::vector<double> dist_stack{0.0};
  std::vector<double> time_stack{0.0};
  detail::dfs_paths(g, origin, dest, w_d, w_t, stack, visited, dist_stack, time_stack, out);
  return out;
}

// (cost, node sequence) order: the reference ranking for k-path checks.
inline void sort_paths(std::vector<EnumeratedPath>& paths) {
  std::sort(paths.begin(), paths.end(), [](const EnumeratedPath& a, const EnumeratedPath& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.nodes < b.nodes;
  });
}

// Nodes on a coordinate grid near Chennai spaced ~100 m apart so no two
// snap together.
inline std::vector<GeoPoint> grid_coords(std::size_t n) {
  std::vector<GeoPoint> coords;
  coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    coords.emplace_back(12.9 + 0.001 * static_cast<double>(i / 8),
                        80.1 + 0.001 * static_cast<double>(i % 8));
  return coords;
}

inline Polyline straight_segment(const GeoPoint& a, const GeoPoint& b) {
  return Polyline(std::vector<GeoPoint>{a, b});
}

// Random digraph with a guaranteed directed path 0 -> n-1: a random
// arborescence rooted at 0 plus extra random edges, costs in [1, 100].
inline NetworkGraph random_connected_graph(std::mt19937_64& rng, int max_nodes = 12,
                                           int max_edges = 30) {
  const int n = 4 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes - 3));
  const auto coords = grid_coords(static_cast<std::size_t>(n));
  const auto rand_cost = [&rng]() {
    return 1.0 + static_cast<double>(rng() % 990000) / 10000.0;  // [1, 100), 4 decimals
  };

  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  const auto add_edge = [&](NodeId from, NodeId to) {
    if (from == to || !used.emplace(from, to).second) return;
    edges.push_back(Edge{from, to, rand_cost(), rand_cost(),
                         straight_segment(coords[from], coords[to])});
  };

  for (int v = 1; v < n; ++v)
    add_edge(static_cast<NodeId>(rng() % static_cast<std::uint64_t>(v)),
             static_cast<NodeId>(v));
  const int extra = static_cast<int>(rng() % static_cast<std::uint64_t>(max_edges - n + 2));
  for (int i = 0; i < extra && static_cast<int>(edges.size()) < max_edges; ++i)
    add_edge(static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n)),
             static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n)));

  return NetworkGraph(std::vector<GeoPoint>(coords), std::move(edges));
}

}  // namespace testsupport
