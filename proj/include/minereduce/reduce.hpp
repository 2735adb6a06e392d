#pragma once

// Pattern-based instance contraction and solution expansion.
//
// Each segment (i_1, ..., i_k) becomes one cluster vertex g with
//   q_g      = q_{i_1} + ... + q_{i_k}
//   d(x, g)  = d(x, i_1)              for every remaining vertex x
//   d(g, x)  = d(i_k, x)
//   l_g      = d(i_1, i_2) + ... + d(i_{k-1}, i_k)
// Untouched customers keep their relative order and are renumbered 1..s;
// clusters follow as s+1, s+2, ... The reduced matrix is asymmetric at the
// cluster rows and columns even when the original is symmetric.
//
// A route through g costs exactly what the expanded route costs on the
// original instance, so expansion preserves cost and feasibility.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minereduce/construct.hpp"
#include "minereduce/local_search.hpp"
#include "minereduce/model.hpp"
#include "minereduce/rng.hpp"

namespace minereduce {

struct ReductionMap {
  std::map<VertexId, std::vector<VertexId>> entries;  // cluster id -> original path
  std::map<VertexId, VertexId> passthrough;           // reduced id -> original id

  // Original customers represented by reduced vertex `id`.
  std::vector<VertexId> expand(VertexId id) const {
    if (auto it = entries.find(id); it != entries.end()) return it->second;
    if (auto it = passthrough.find(id); it != passthrough.end()) return {it->second};
    throw StructuralError("reduction map has no entry for vertex " + std::to_string(id));
  }
};

struct Reduction {
  Instance instance;
  ReductionMap map;
  std::vector<Segment> dropped;  // segments too heavy for any vehicle
};

inline Reduction reduce_instance(const Instance& inst, std::span<const Segment> segments) {
  detail::check_segments(inst, segments);
  const double qmax = inst.max_capacity();

  Reduction out;
  std::vector<const Segment*> merged;
  std::vector<bool> in_cluster(inst.vertex_count(), false);
  for (const auto& seg : segments) {
    if (seg.customers.size() < 2) continue;
    double demand = 0;
    for (VertexId c : seg.customers) demand += inst.demand(c);
    if (demand > qmax) {
      out.dropped.push_back(seg);
      continue;
    }
    merged.push_back(&seg);
    for (VertexId c : seg.customers) in_cluster[static_cast<std::size_t>(c)] = true;
  }

  // reduced id -> representative original vertices (entry side, exit side)
  std::vector<VertexId> entry{kDepot}, exit{kDepot};
  Instance& red = out.instance;
  red.name = inst.name;
  red.fleet = inst.fleet;
  red.nodes.push_back(inst.nodes[0]);
  for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c) {
    if (in_cluster[static_cast<std::size_t>(c)]) continue;
    const auto id = static_cast<VertexId>(red.nodes.size());
    Node node = inst.nodes[static_cast<std::size_t>(c)];
    node.id = id;
    red.nodes.push_back(node);
    entry.push_back(c);
    exit.push_back(c);
    out.map.passthrough.emplace(id, c);
  }
  for (const Segment* seg : merged) {
    const auto id = static_cast<VertexId>(red.nodes.size());
    Node node;
    node.id = id;
    node.coords = inst.nodes[static_cast<std::size_t>(seg->customers.front())].coords;
    for (std::size_t k = 0; k < seg->customers.size(); ++k) {
      const VertexId c = seg->customers[k];
      node.demand += inst.demand(c);
      node.length += inst.length(c);
      if (k + 1 < seg->customers.size()) node.length += inst.dist(c, seg->customers[k + 1]);
    }
    red.nodes.push_back(node);
    entry.push_back(seg->customers.front());
    exit.push_back(seg->customers.back());
    out.map.entries.emplace(id, seg->customers);
  }

  const std::size_t dim = red.nodes.size();
  red.dist = DistanceMatrix(dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      if (a != b) red.dist.at(static_cast<VertexId>(a), static_cast<VertexId>(b)) = inst.dist(exit[a], entry[b]);
  return out;
}

inline Solution expand_solution(const Instance& original, const Solution& reduced, const ReductionMap& map) {
  std::vector<Route> routes;
  routes.reserve(reduced.routes.size());
  for (const auto& r : reduced.routes) {
    Route route{r.vehicle, {}};
    for (VertexId v : r.customers) {
      const auto members = map.expand(v);
      route.customers.insert(route.customers.end(), members.begin(), members.end());
    }
    routes.push_back(std::move(route));
  }
  return make_solution(original, std::move(routes));
}

struct GenerationOptions {
  // Run the full ILS on the reduced instance instead of a single descent.
  bool full_ils = false;
};

// Reduce, construct and improve on the reduced instance, expand back.
// Construction failures on the reduced instance propagate.
inline Solution minereduce_generation(const Instance& inst, std::span<const Segment> segments,
                                      const IlsParams& ils_params, Rng& rng, GenerationOptions options = {}) {
  const Reduction reduction = reduce_instance(inst, segments);
  Solution reduced = generate_initial_solution(reduction.instance, rng);
  reduced = options.full_ils ? ils(reduction.instance, reduced, ils_params, rng)
                             : rvnd_descent(reduction.instance, reduced, rng, ils_params);
  return expand_solution(inst, reduced, reduction.map);
}

}  // namespace minereduce
