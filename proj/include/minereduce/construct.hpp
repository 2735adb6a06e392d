#pragma once

// Randomized cheapest-insertion construction.
//
// A construction opens as many routes as the fleet needs to carry the total
// demand (largest vehicles first), seeds each with a random customer, then
// inserts the remaining customers in random order. Each insertion picks the
// (route, position, vehicle type) with the smallest cost increase; with
// probability 1/2 it instead picks uniformly among the three cheapest.
//
// Pattern seeding starts from the given segments as fixed routes and never
// inserts a customer between two consecutive segment members.

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minereduce/model.hpp"
#include "minereduce/rng.hpp"

namespace minereduce {

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, std::vector<VertexId> unplaced)
      : std::runtime_error(what), unplaced_(std::move(unplaced)) {}

  const std::vector<VertexId>& unplaced() const { return unplaced_; }

 private:
  std::vector<VertexId> unplaced_;
};

namespace detail {

inline constexpr int kConstructionAttempts = 10;
inline constexpr double kRandomChoiceProbability = 0.5;
inline constexpr std::size_t kRandomChoicePool = 3;

class InsertionBuilder {
 public:
  InsertionBuilder(const Instance& inst, Rng& rng) : inst_(inst), rng_(rng), used_(inst.fleet.size(), 0) {}

  bool available(TypeIndex u) const {
    const auto& count = inst_.fleet[u].count;
    return !count || used_[u] < *count;
  }

  // Adds a fixed route holding `seg`. Returns false when no vehicle type can
  // take it.
  bool seed_segment(const Segment& seg, int block) {
    double load = 0;
    for (VertexId c : seg.customers) load += inst_.demand(c);
    const double travel = route_travel(inst_, seg.customers);
    TypeIndex chosen = seg.vehicle;
    if (seg.vehicle >= inst_.fleet.size() || !available(seg.vehicle) || inst_.fleet[seg.vehicle].capacity < load) {
      double best = std::numeric_limits<double>::infinity();
      bool found = false;
      for (TypeIndex u = 0; u < inst_.fleet.size(); ++u) {
        if (!available(u) || inst_.fleet[u].capacity < load) continue;
        const double cost = type_cost(u, travel);
        if (cost < best) {
          best = cost;
          chosen = u;
          found = true;
        }
      }
      if (!found) return join_segment(seg, block, load, travel);
    }
    Open route;
    route.vehicle = chosen;
    route.seq = seg.customers;
    route.block.assign(seg.customers.size(), block);
    route.lock_front = seg.from_depot;
    route.lock_back = seg.to_depot;
    route.load = load;
    route.travel = travel;
    ++used_[chosen];
    routes_.push_back(std::move(route));
    return true;
  }

  // No vehicle left for a route of its own: attach `seg` to either end of
  // the open route where it adds the least cost, upgrading that route's type
  // if needed. Depot locks of both sides must be compatible.
  bool join_segment(const Segment& seg, int block, double load, double travel) {
    struct Pick {
      double delta;
      std::size_t route;
      bool back;
      TypeIndex vehicle;
    };
    std::optional<Pick> best;
    const double inner = travel - inst_.dist(kDepot, seg.customers.front()) - inst_.dist(seg.customers.back(), kDepot);
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const Open& route = routes_[r];
      const double current = type_cost(route.vehicle, route.travel);
      for (bool back : {true, false}) {
        if (back && (route.lock_back || seg.from_depot)) continue;
        if (!back && (route.lock_front || seg.to_depot)) continue;
        const double joined =
            back ? route.travel - inst_.dist(route.seq.back(), kDepot) + inst_.dist(route.seq.back(), seg.customers.front()) +
                       inner + inst_.dist(seg.customers.back(), kDepot)
                 : route.travel - inst_.dist(kDepot, route.seq.front()) + inst_.dist(kDepot, seg.customers.front()) +
                       inner + inst_.dist(seg.customers.back(), route.seq.front());
        for (TypeIndex u = 0; u < inst_.fleet.size(); ++u) {
          if (u != route.vehicle && !available(u)) continue;
          if (route.load + load > inst_.fleet[u].capacity) continue;
          const double delta = type_cost(u, joined) - current;
          if (!best || delta < best->delta) best = Pick{delta, r, back, u};
        }
      }
    }
    if (!best) return false;
    Open& route = routes_[best->route];
    if (best->back) {
      route.seq.insert(route.seq.end(), seg.customers.begin(), seg.customers.end());
      route.block.insert(route.block.end(), seg.customers.size(), block);
      route.lock_back = seg.to_depot;
    } else {
      route.seq.insert(route.seq.begin(), seg.customers.begin(), seg.customers.end());
      route.block.insert(route.block.begin(), seg.customers.size(), block);
      route.lock_front = seg.from_depot;
    }
    route.load += load;
    route.travel = route_travel(inst_, route.seq);
    if (best->vehicle != route.vehicle) {
      --used_[route.vehicle];
      ++used_[best->vehicle];
      route.vehicle = best->vehicle;
    }
    return true;
  }

  // Opens routes, largest capacity first, until the fleet opened so far
  // (including already seeded routes) can carry `demand`. Each new route is
  // seeded with the next customer from `pending`.
  void open_needed_routes(std::vector<VertexId>& pending, double demand) {
    double capacity = 0;
    for (const auto& r : routes_) capacity += inst_.fleet[r.vehicle].capacity;
    std::vector<TypeIndex> order(inst_.fleet.size());
    std::iota(order.begin(), order.end(), TypeIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](TypeIndex a, TypeIndex b) {
      return inst_.fleet[a].capacity > inst_.fleet[b].capacity;
    });
    std::size_t next = 0;
    for (TypeIndex u : order) {
      while (capacity < demand && next < pending.size() && available(u) &&
             inst_.demand(pending[next]) <= inst_.fleet[u].capacity) {
        Open route;
        route.vehicle = u;
        const VertexId c = pending[next++];
        route.seq = {c};
        route.block = {-1};
        route.load = inst_.demand(c);
        route.travel = route_travel(inst_, route.seq);
        ++used_[u];
        capacity += inst_.fleet[u].capacity;
        routes_.push_back(std::move(route));
      }
    }
    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(next));
  }

  bool insert(VertexId c) {
    std::array<Candidate, kRandomChoicePool> best;
    std::size_t found = 0;
    auto offer = [&](const Candidate& cand) {
      // Keep the cheapest few; strict comparison keeps scan order on ties.
      std::size_t pos = found;
      while (pos > 0 && cand.delta < best[pos - 1].delta) --pos;
      if (pos >= kRandomChoicePool) return;
      const std::size_t last = std::min(found, kRandomChoicePool - 1);
      for (std::size_t k = last; k > pos; --k) best[k] = best[k - 1];
      best[pos] = cand;
      found = std::min(found + 1, kRandomChoicePool);
    };

    const double q = inst_.demand(c);
    const double lc = inst_.length(c);
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const Open& route = routes_[r];
      const double current = type_cost(route.vehicle, route.travel);
      const std::size_t len = route.seq.size();
      for (std::size_t pos = 0; pos <= len; ++pos) {
        if (!gap_open(route, pos)) continue;
        const VertexId prev = pos == 0 ? kDepot : route.seq[pos - 1];
        const VertexId next = pos == len ? kDepot : route.seq[pos];
        const double travel = route.travel + inst_.dist(prev, c) + inst_.dist(c, next) - inst_.dist(prev, next) + lc;
        for (TypeIndex u = 0; u < inst_.fleet.size(); ++u) {
          if (u != route.vehicle && !available(u)) continue;
          if (route.load + q > inst_.fleet[u].capacity) continue;
          offer({type_cost(u, travel) - current, static_cast<int>(r), pos, u});
        }
      }
    }
    const double solo = inst_.dist(kDepot, c) + inst_.dist(c, kDepot) + lc;
    for (TypeIndex u = 0; u < inst_.fleet.size(); ++u) {
      if (!available(u) || q > inst_.fleet[u].capacity) continue;
      offer({type_cost(u, solo), -1, 0, u});
    }
    if (found == 0) return false;

    const Candidate& pick = rng_.chance(kRandomChoiceProbability) ? best[rng_.below(found)] : best[0];
    apply(c, pick);
    return true;
  }

  std::vector<Route> routes() const {
    std::vector<Route> out;
    out.reserve(routes_.size());
    for (const auto& r : routes_) out.push_back({r.vehicle, r.seq});
    return out;
  }

 private:
  struct Open {
    TypeIndex vehicle = 0;
    std::vector<VertexId> seq;
    std::vector<int> block;  // segment id per position, -1 when free
    bool lock_front = false;
    bool lock_back = false;
    double load = 0;
    double travel = 0;
  };

  struct Candidate {
    double delta = 0;
    int route = -1;  // -1 opens a new route
    std::size_t pos = 0;
    TypeIndex vehicle = 0;
  };

  double type_cost(TypeIndex u, double travel) const {
    return inst_.fleet[u].fixed_cost + inst_.fleet[u].unit_cost * travel;
  }

  static bool gap_open(const Open& route, std::size_t pos) {
    if (pos == 0) return !route.lock_front;
    if (pos == route.seq.size()) return !route.lock_back;
    return route.block[pos - 1] < 0 || route.block[pos - 1] != route.block[pos];
  }

  void apply(VertexId c, const Candidate& pick) {
    if (pick.route < 0) {
      Open route;
      route.vehicle = pick.vehicle;
      route.seq = {c};
      route.block = {-1};
      route.load = inst_.demand(c);
      route.travel = route_travel(inst_, route.seq);
      ++used_[pick.vehicle];
      routes_.push_back(std::move(route));
      return;
    }
    Open& route = routes_[static_cast<std::size_t>(pick.route)];
    const std::size_t len = route.seq.size();
    const VertexId prev = pick.pos == 0 ? kDepot : route.seq[pick.pos - 1];
    const VertexId next = pick.pos == len ? kDepot : route.seq[pick.pos];
    route.travel += inst_.dist(prev, c) + inst_.dist(c, next) - inst_.dist(prev, next) + inst_.length(c);
    route.load += inst_.demand(c);
    route.seq.insert(route.seq.begin() + static_cast<std::ptrdiff_t>(pick.pos), c);
    route.block.insert(route.block.begin() + static_cast<std::ptrdiff_t>(pick.pos), -1);
    if (pick.vehicle != route.vehicle) {
      --used_[route.vehicle];
      ++used_[pick.vehicle];
      route.vehicle = pick.vehicle;
    }
  }

  const Instance& inst_;
  Rng& rng_;
  std::vector<Open> routes_;
  std::vector<std::size_t> used_;
};

inline void check_segments(const Instance& inst, std::span<const Segment> segments) {
  std::vector<bool> seen(inst.vertex_count(), false);
  for (const auto& seg : segments) {
    for (VertexId c : seg.customers) {
      if (!inst.valid_customer(c)) throw StructuralError("segment references invalid customer " + std::to_string(c));
      if (seen[static_cast<std::size_t>(c)])
        throw StructuralError("customer " + std::to_string(c) + " appears in more than one segment");
      seen[static_cast<std::size_t>(c)] = true;
    }
  }
}

// Deterministic last resort: first-fit decreasing of blocks (segments and
// single customers) into vehicles taken largest first.
inline std::vector<Route> pack_first_fit(const Instance& inst, std::span<const Segment> segments,
                                         std::vector<VertexId>& unplaced) {
  struct Block {
    std::vector<VertexId> customers;
    double demand = 0;
  };
  std::vector<Block> blocks;
  std::vector<bool> in_segment(inst.vertex_count(), false);
  for (const auto& seg : segments) {
    if (seg.customers.empty()) continue;
    Block b{seg.customers, 0};
    for (VertexId c : seg.customers) {
      b.demand += inst.demand(c);
      in_segment[static_cast<std::size_t>(c)] = true;
    }
    blocks.push_back(std::move(b));
  }
  for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c)
    if (!in_segment[static_cast<std::size_t>(c)]) blocks.push_back({{c}, inst.demand(c)});
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.demand > b.demand; });

  std::vector<TypeIndex> order(inst.fleet.size());
  std::iota(order.begin(), order.end(), TypeIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TypeIndex a, TypeIndex b) { return inst.fleet[a].capacity > inst.fleet[b].capacity; });

  struct Bin {
    TypeIndex vehicle;
    double load = 0;
    std::vector<const Block*> blocks;
  };
  std::vector<Bin> bins;
  std::vector<std::size_t> used(inst.fleet.size(), 0);
  for (const auto& block : blocks) {
    bool placed = false;
    for (auto& bin : bins) {
      if (bin.load + block.demand <= inst.fleet[bin.vehicle].capacity) {
        bin.load += block.demand;
        bin.blocks.push_back(&block);
        placed = true;
        break;
      }
    }
    if (placed) continue;
    for (TypeIndex u : order) {
      const auto& v = inst.fleet[u];
      if ((v.count && used[u] >= *v.count) || block.demand > v.capacity) continue;
      ++used[u];
      bins.push_back({u, block.demand, {&block}});
      placed = true;
      break;
    }
    if (!placed) unplaced.insert(unplaced.end(), block.customers.begin(), block.customers.end());
  }
  if (!unplaced.empty()) return {};

  // Nearest-neighbour chaining of blocks inside each bin.
  std::vector<Route> routes;
  for (auto& bin : bins) {
    Route route{bin.vehicle, {}};
    VertexId at = kDepot;
    std::vector<const Block*> left = bin.blocks;
    while (!left.empty()) {
      auto it = std::min_element(left.begin(), left.end(), [&](const Block* a, const Block* b) {
        return inst.dist(at, a->customers.front()) < inst.dist(at, b->customers.front());
      });
      route.customers.insert(route.customers.end(), (*it)->customers.begin(), (*it)->customers.end());
      at = (*it)->customers.back();
      left.erase(it);
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

}  // namespace detail

// Builds a feasible solution whose routes start from `segments`, keeping each
// segment contiguous and in its given orientation. A segment whose vehicle
// type is exhausted (or too small) is placed on the cheapest type that can
// take it. Throws ConstructionError when the fleet cannot serve everyone.
inline Solution seed_solution_from_pattern(const Instance& inst, std::span<const Segment> segments, Rng& rng) {
  detail::check_segments(inst, segments);
  std::vector<bool> placed(inst.vertex_count(), false);
  std::vector<VertexId> last_unplaced;

  for (int attempt = 0; attempt < detail::kConstructionAttempts; ++attempt) {
    detail::InsertionBuilder builder(inst, rng);
    std::fill(placed.begin(), placed.end(), false);
    int block = 0;
    for (const auto& seg : segments) {
      if (seg.customers.empty()) continue;
      if (!builder.seed_segment(seg, block++)) continue;  // its customers get inserted freely
      for (VertexId c : seg.customers) placed[static_cast<std::size_t>(c)] = true;
    }
    std::vector<VertexId> pending;
    for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c)
      if (!placed[static_cast<std::size_t>(c)]) pending.push_back(c);
    rng.shuffle(pending);
    builder.open_needed_routes(pending, inst.total_demand());

    last_unplaced.clear();
    for (VertexId c : pending)
      if (!builder.insert(c)) last_unplaced.push_back(c);
    if (last_unplaced.empty()) return make_solution(inst, builder.routes());
  }

  std::vector<VertexId> unplaced;
  auto routes = detail::pack_first_fit(inst, segments, unplaced);
  if (unplaced.empty()) return make_solution(inst, std::move(routes));
  std::sort(unplaced.begin(), unplaced.end());
  throw ConstructionError("fleet cannot serve " + std::to_string(unplaced.size()) + " customer(s)", unplaced);
}

inline Solution generate_initial_solution(const Instance& inst, Rng& rng) {
  return seed_solution_from_pattern(inst, {}, rng);
}

}  // namespace minereduce
