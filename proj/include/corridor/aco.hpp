#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "corridor/errors.hpp"
#include "corridor/network.hpp"

namespace corridor {

// Engine configuration. Defaults follow the bounded-pheromone elitist
// scheme documented in the README.
struct AcoParams {
  double alpha = 1.0;   // pheromone exponent
  double beta = 2.0;    // heuristic exponent
  double rho = 0.1;     // evaporation rate
  double q = 1.0;       // deposit scale
  int n_ants = 20;
  int n_iterations = 200;
  double w_d = 1.0;     // weight on meters
  double w_t = 1.0;     // weight on seconds
  double tau_min = 0.01;
  double tau_max = 10.0;
  std::uint64_t seed = 0;

  void validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha) || alpha < 0.0) throw ValidationError("aco: alpha must be >= 0");
    if (!finite(beta) || beta < 0.0) throw ValidationError("aco: beta must be >= 0");
    if (!finite(rho) || rho <= 0.0 || rho >= 1.0)
      throw ValidationError("aco: rho must be in (0, 1)");
    if (!finite(q) || q <= 0.0) throw ValidationError("aco: q must be > 0");
    if (n_ants < 1) throw ValidationError("aco: n_ants must be >= 1");
    if (n_iterations < 1) throw ValidationError("aco: n_iterations must be >= 1");
    if (!finite(w_d) || w_d < 0.0 || !finite(w_t) || w_t < 0.0)
      throw ValidationError("aco: weights must be >= 0");
    if (w_d == 0.0 && w_t == 0.0) throw ValidationError("aco: weights must not both be zero");
    if (!finite(tau_min) || !finite(tau_max) || tau_min <= 0.0 || tau_min > tau_max)
      throw ValidationError("aco: need 0 < tau_min <= tau_max");
  }
};

// The scalarized objective shared with the exact shortest-path oracle.
inline double route_cost(const Route& r, double w_d, double w_t) {
  return w_d * r.total_distance_m + w_t * r.total_time_s;
}

// One value per directed edge, kept in [tau_min, tau_max]. Starts at
// tau_max so early iterations explore.
class PheromoneMatrix {
 public:
  PheromoneMatrix(std::size_t edge_count, double tau_min, double tau_max)
      : tau_(edge_count, tau_max), tau_min_(tau_min), tau_max_(tau_max) {}

  double operator[](EdgeId e) const { return tau_[e]; }
  std::size_t size() const { return tau_.size(); }
  double tau_min() const { return tau_min_; }
  double tau_max() const { return tau_max_; }

  void evaporate(double rho) {
    for (double& t : tau_) t *= (1.0 - rho);
  }

  void deposit(EdgeId e, double amount) { tau_[e] += amount; }

  void set(EdgeId e, double value) { tau_[e] = std::clamp(value, tau_min_, tau_max_); }

  void clamp() {
    for (double& t : tau_) t = std::clamp(t, tau_min_, tau_max_);
  }

 private:
  std::vector<double> tau_;
  double tau_min_;
  double tau_max_;
};

using Rng = std::mt19937_64;

// 53-bit uniform in [0, 1); avoids the implementation-defined
// std::uniform_real_distribution so runs reproduce bit-for-bit.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Rng make_ant_rng(std::uint64_t seed, std::uint64_t iteration, std::uint64_t ant) {
  std::seed_seq seq{seed, iteration, ant};
  return Rng(seq);
}

struct EdgeProbability {
  EdgeId edge;
  double probability;
};

// p(e) proportional to tau(e)^alpha * eta(e)^beta over edges leading to
// unvisited nodes, eta(e) = 1 / (w_d*length + w_t*time). An empty result
// signals a dead end.
inline std::vector<EdgeProbability> transition_probabilities(const NetworkGraph& g,
                                                             const PheromoneMatrix& pheromone,
                                                             NodeId current,
                                                             const std::vector<char>& visited,
                                                             const AcoParams& params) {
  std::vector<EdgeProbability> out;
  double total = 0.0;
  for (EdgeId eid : g.out_edges(current)) {
    const Edge& e = g.edge(eid);
    if (visited[e.to]) continue;
    const double eta = 1.0 / (params.w_d * e.length_m + params.w_t * e.travel_time_s);
    const double weight = std::pow(pheromone[eid], params.alpha) * std::pow(eta, params.beta);
    out.push_back({eid, weight});
    total += weight;
  }
  if (out.empty()) return out;
  if (total > 0.0) {
    for (auto& ep : out) ep.probability /= total;
  } else {
    // Underflowed weights: fall back to a uniform choice.
    for (auto& ep : out) ep.probability = 1.0 / static_cast<double>(out.size());
  }
  return out;
}

// Builds one loopless tour by repeated probabilistic edge choice. Returns
// nothing when the ant walks into a dead end; the caller abandons it.
inline std::optional<Route> construct_ant_solution(const NetworkGraph& g,
                                                   const PheromoneMatrix& pheromone,
                                                   NodeId origin, NodeId dest,
                                                   const AcoParams& params, Rng& rng) {
  std::vector<char> visited(g.node_count(), 0);
  visited[origin] = 1;
  detail::SearchPath path;
  path.nodes.push_back(origin);
  NodeId current = origin;

  while (current != dest) {
    const auto probs = transition_probabilities(g, pheromone, current, visited, params);
    if (probs.empty()) return std::nullopt;
    const double r = uniform01(rng);
    double cum = 0.0;
    EdgeId chosen = probs.back().edge;
    for (const auto& ep : probs) {
      cum += ep.probability;
      if (r < cum) {
        chosen = ep.edge;
        break;
      }
    }
    path.edges.push_back(chosen);
    current = g.edge(chosen).to;
    path.nodes.push_back(current);
    visited[current] = 1;
  }
  return detail::make_route(g, path);
}

// Evaporate everywhere, deposit q/cost along the iteration-best and the
// best-so-far route, then clamp into [tau_min, tau_max]. With no completed
// solutions this iteration the update is pure evaporation plus clamp.
inline void update_pheromones(PheromoneMatrix& pheromone, const NetworkGraph& g,
                              std::span<const Route> iteration_solutions,
                              const Route* best_so_far, const AcoParams& params) {
  pheromone.evaporate(params.rho);
  if (!iteration_solutions.empty()) {
    const Route* iteration_best = &iteration_solutions.front();
    for (const Route& r : iteration_solutions.subspan(1))
      if (route_cost(r, params.w_d, params.w_t) <
          route_cost(*iteration_best, params.w_d, params.w_t))
        iteration_best = &r;

    const auto deposit_along = [&](const Route& r) {
      const double amount = params.q / route_cost(r, params.w_d, params.w_t);
      for (const Edge& e : r.edges)
        if (auto eid = g.find_edge(e.from, e.to)) pheromone.deposit(*eid, amount);
    };
    deposit_along(*iteration_best);
    if (best_so_far) deposit_along(*best_so_far);
  }
  pheromone.clamp();
}

struct IterationTrace {
  int iteration = 0;
  double best_so_far_cost = 0.0;
  std::optional<double> iteration_best_cost;  // absent when no ant completed

  bool operator==(const IterationTrace&) const = default;
};

struct FactorReport {
  double total_distance_m = 0.0;
  double total_time_s = 0.0;
  double w_d = 0.0;
  double w_t = 0.0;
  double distance_cost = 0.0;  // w_d * total_distance_m
  double time_cost = 0.0;      // w_t * total_time_s
};

struct OptimizationResult {
  Route best_route;
  double best_cost = 0.0;
  FactorReport factors;
  std::vector<IterationTrace> per_iteration;
  std::vector<double> candidate_costs;  // k-candidate comparison, filled by the pipeline
  std::uint64_t seed = 0;
  long ants_launched = 0;
  long ants_completed = 0;
  long ants_abandoned = 0;
};

// Full run: n_iterations of n_ants constructions with elitist updates.
// Deterministic for a given (graph, endpoints, params): every ant draws
// from an RNG seeded by (seed, iteration, ant), so the schedule cannot
// influence the outcome.
inline OptimizationResult optimize(const NetworkGraph& g, NodeId origin, NodeId dest,
                                   const AcoParams& params) {
  params.validate();
  detail::check_endpoints_and_weights(g, origin, dest, params.w_d, params.w_t);
  if (g.component(origin) != g.component(dest)) detail::throw_no_path(g, origin, dest);

  PheromoneMatrix pheromone(g.edge_count(), params.tau_min, params.tau_max);
  OptimizationResult result;
  result.seed = params.seed;

  std::optional<Route> best;
  double best_cost = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < params.n_iterations; ++iter) {
    std::vector<Route> solutions;
    solutions.reserve(params.n_ants);
    for (int ant = 0; ant < params.n_ants; ++ant) {
      ++result.ants_launched;
      Rng rng = make_ant_rng(params.seed, static_cast<std::uint64_t>(iter),
                             static_cast<std::uint64_t>(ant));
      auto route = construct_ant_solution(g, pheromone, origin, dest, params, rng);
      if (route) {
        ++result.ants_completed;
        solutions.push_back(std::move(*route));
      } else {
        ++result.ants_abandoned;
      }
    }

    std::optional<double> iteration_best_cost;
    for (const Route& r : solutions) {
      const double c = route_cost(r, params.w_d, params.w_t);
      if (!iteration_best_cost || c < *iteration_best_cost) iteration_best_cost = c;
      if (c < best_cost) {  // ties keep the first route found under seed order
        best_cost = c;
        best = r;
      }
    }

    update_pheromones(pheromone, g, solutions, best ? &*best : nullptr, params);

    result.per_iteration.push_back(
        {iter, best ? best_cost : std::numeric_limits<double>::infinity(),
         iteration_best_cost});
  }

  if (!best)
    throw OptimizationError("optimization failed: no ant completed a tour (" +
                                std::to_string(result.ants_abandoned) + " of " +
                                std::to_string(result.ants_launched) + " ants abandoned)",
                            result.ants_launched, result.ants_abandoned);

  result.best_route = std::move(*best);
  result.best_cost = best_cost;
  result.factors = {result.best_route.total_distance_m,
                    result.best_route.total_time_s,
                    params.w_d,
                    params.w_t,
                    params.w_d * result.best_route.total_distance_m,
                    params.w_t * result.best_route.total_time_s};
  return result;
}

}  // namespace corridor
