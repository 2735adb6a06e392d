#pragma once

// Shared fixtures and brute-force oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "minereduce/minereduce.hpp"

namespace testing_support {

using namespace minereduce;

// Vertex ids of the small worked reduction example.
enum WorkedVertex : VertexId { D = 0, A = 1, B = 2, C = 3, Dv = 4, E = 5, F = 6 };

// Seven vertices: depot, a, b, c and the path d -> e -> f. Only the arcs
// entering d, leaving f and running along d-e-f matter to the reduction; the
// remaining entries are filler.
inline Instance worked_instance() {
  Instance inst;
  inst.name = "worked";
  const double q[] = {0, 3, 3, 3, 4, 2, 2};
  for (VertexId i = 0; i < 7; ++i) inst.nodes.push_back({i, q[i], 0, std::nullopt});
  inst.dist = DistanceMatrix(7, 6.0);
  for (VertexId i = 0; i < 7; ++i) inst.dist.at(i, i) = 0;
  auto set = [&](VertexId a, VertexId b, double v) { inst.dist.at(a, b) = v; };
  set(D, Dv, 3); set(A, Dv, 5); set(B, Dv, 4); set(C, Dv, 3);
  set(F, D, 1); set(F, A, 2); set(F, B, 2); set(F, C, 4);
  set(Dv, E, 2); set(E, F, 2);
  // Reverse-direction filler chosen to differ, so orientation mistakes show.
  set(E, Dv, 7); set(F, E, 7); set(Dv, D, 9); set(D, F, 9);
  inst.fleet = {VehicleType{10, 0, 1, std::nullopt}};
  return inst;
}

struct RandomSpec {
  std::size_t customers = 8;
  std::size_t types = 2;
  bool asymmetric = false;
  bool lengths = false;
  bool limited = false;
  double max_demand = 10;
};

// Integer-valued random instance; asymmetric matrices get independent
// entries per direction.
inline Instance random_instance(Rng& rng, const RandomSpec& spec) {
  Instance inst;
  inst.name = "rand";
  const std::size_t dim = spec.customers + 1;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < dim; ++i) {
    pts.push_back({std::floor(rng.uniform(0, 50)), std::floor(rng.uniform(0, 50))});
    Node n{static_cast<VertexId>(i), 0, 0, pts.back()};
    if (i > 0) {
      n.demand = static_cast<double>(rng.between(1, static_cast<std::int64_t>(spec.max_demand)));
      if (spec.lengths) n.length = static_cast<double>(rng.between(0, 5));
    }
    inst.nodes.push_back(n);
  }
  inst.dist = euclidean_distances(pts);
  if (spec.asymmetric)
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        if (a != b) inst.dist.at(static_cast<VertexId>(a), static_cast<VertexId>(b)) = static_cast<double>(rng.between(1, 40));
  double cap = 2.5 * spec.max_demand;
  for (std::size_t u = 0; u < spec.types; ++u) {
    VehicleType t{cap, static_cast<double>(rng.between(0, 30)), 1.0 + 0.25 * static_cast<double>(u), std::nullopt};
    inst.fleet.push_back(t);
    cap *= 1.6;
  }
  if (spec.limited) {
    double have = 0;
    for (auto& t : inst.fleet) t.count = 0;
    for (std::size_t u = 0; have < 1.3 * inst.total_demand(); u = (u + 1) % inst.fleet.size()) {
      ++*inst.fleet[u].count;
      have += inst.fleet[u].capacity;
    }
  }
  return inst;
}

// Random partition of the customers into routes with random vehicle types.
// Ignores capacity; useful where only cost arithmetic matters.
inline Solution random_solution(const Instance& inst, Rng& rng) {
  std::vector<VertexId> order;
  for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c) order.push_back(c);
  rng.shuffle(order);
  std::vector<Route> routes;
  for (VertexId c : order) {
    if (routes.empty() || rng.chance(0.3)) routes.push_back({static_cast<TypeIndex>(rng.below(inst.fleet.size())), {}});
    routes.back().customers.push_back(c);
  }
  return make_solution(inst, std::move(routes));
}

// Per-arc cost re-summation, written independently of the library formula.
inline double oracle_cost(const Instance& inst, const Solution& sol) {
  double total = 0;
  for (const auto& r : sol.routes) {
    const auto& v = inst.fleet[r.vehicle];
    std::vector<VertexId> walk{0};
    walk.insert(walk.end(), r.customers.begin(), r.customers.end());
    walk.push_back(0);
    double arcs = 0, lengths = 0;
    for (std::size_t k = 1; k < walk.size(); ++k) arcs += inst.dist(walk[k - 1], walk[k]);
    for (VertexId c : r.customers) lengths += inst.nodes[static_cast<std::size_t>(c)].length;
    total += v.fixed_cost + v.unit_cost * arcs + v.unit_cost * lengths;
  }
  return total;
}

inline bool close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Exact optimum for one unlimited vehicle type: every permutation, each
// split into consecutive capacity-feasible routes by exhaustive DP.
inline double brute_force_optimum(const Instance& inst) {
  const auto& v = inst.fleet.at(0);
  std::vector<VertexId> perm;
  for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c) perm.push_back(c);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = perm.size();
  do {
    std::vector<double> f(n + 1, std::numeric_limits<double>::infinity());
    f[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(f[i])) continue;
      double load = 0, travel = 0;
      for (std::size_t j = i; j < n; ++j) {
        load += inst.demand(perm[j]);
        if (load > v.capacity) break;
        travel += (j == i ? inst.dist(0, perm[j]) : inst.dist(perm[j - 1], perm[j])) + inst.length(perm[j]);
        const double route = v.fixed_cost + v.unit_cost * (travel + inst.dist(perm[j], 0));
        f[j + 1] = std::min(f[j + 1], f[i] + route);
      }
    }
    best = std::min(best, f[n]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// True when `seg` occurs as a contiguous, same-order run in some route.
inline bool contains_contiguous(const Solution& sol, const std::vector<VertexId>& seg) {
  for (const auto& r : sol.routes)
    if (std::search(r.customers.begin(), r.customers.end(), seg.begin(), seg.end()) != r.customers.end()) return true;
  return false;
}

// Drives multi_start with a fixed script: event k says whether iteration
// k + 1 should change the elite set. A change is a fresh single-route
// solution cheaper than anything before; a non-change repeats the most
// recent change, which the elite set rejects as a duplicate.
struct ScriptedPhases {
  explicit ScriptedPhases(std::vector<bool> events) : script(std::move(events)) {}

  std::vector<bool> script;
  std::size_t step = 0;
  std::size_t changes = 0;
  std::vector<std::size_t> mined_at;  // iterations where mine() ran

  Solution generate(Rng&) { return Solution{{Route{0, {1}}}, 1e9}; }
  std::optional<Solution> generate_from(const Pattern&, Rng&) { return std::nullopt; }
  Solution improve(const Solution&, Rng&) {
    const bool change = script.at(step++);
    if (change) ++changes;
    const auto id = static_cast<VertexId>(changes + 1);
    return Solution{{Route{0, {id}}}, 1000.0 - static_cast<double>(changes)};
  }
  PatternList mine(const EliteSet&) {
    mined_at.push_back(step + 1);
    return {};
  }
};

// Straight-line reading of the two-case rule, evaluated at the top of each
// iteration; returns the iterations where mining must fire. The elite set
// starts empty, so a leading non-change still inserts (and counts as one).
inline std::vector<std::size_t> reference_mining(const std::vector<bool>& script, std::size_t delta,
                                                 std::size_t capacity) {
  std::vector<std::size_t> fired;
  std::size_t size = 0, last_change = 0, last_mine = 0;
  bool mined = false;
  bool any_change = false;
  for (std::size_t i = 1; i <= script.size(); ++i) {
    bool stable;
    if (size < 2)
      stable = false;
    else if (!mined)
      stable = i - last_change > delta;
    else
      stable = last_change >= last_mine && i - last_change > delta;
    if (stable) {
      fired.push_back(i);
      mined = true;
      last_mine = i;
    }
    const bool change = script[i - 1] || !any_change;
    if (change) {
      any_change = true;
      size = std::min(size + 1, capacity);
      last_change = i;
    }
  }
  return fired;
}

}  // namespace testing_support
