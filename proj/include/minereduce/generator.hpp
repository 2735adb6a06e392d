#pragma once

// Random Euclidean HFVRP instances for testing and benchmarking.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "minereduce/model.hpp"
#include "minereduce/rng.hpp"

namespace minereduce {

struct GeneratorOptions {
  std::size_t customers = 50;
  std::size_t vehicle_types = 3;
  double grid = 100.0;
  double min_demand = 1, max_demand = 30;
  bool limited_fleet = false;   // finite counts with ~20% slack over total demand
  bool fixed_costs = true;      // zero fixed costs when false
  bool unit_variable_cost = false;  // r_u = 1 for every type
  bool integer_demands = true;
};

inline Instance generate_instance(const GeneratorOptions& opt, Rng& rng, std::string name = "random") {
  if (opt.customers == 0) throw UsageError("generator: need at least one customer");
  if (opt.vehicle_types == 0) throw UsageError("generator: need at least one vehicle type");

  Instance inst;
  inst.name = std::move(name);
  std::vector<Point> pts;
  pts.push_back({opt.grid / 2, opt.grid / 2});
  inst.nodes.push_back({kDepot, 0, 0, pts.back()});
  double max_q = 0;
  for (std::size_t i = 1; i <= opt.customers; ++i) {
    pts.push_back({rng.uniform(0, opt.grid), rng.uniform(0, opt.grid)});
    double q = rng.uniform(opt.min_demand, opt.max_demand);
    if (opt.integer_demands) q = std::round(q);
    max_q = std::max(max_q, q);
    inst.nodes.push_back({static_cast<VertexId>(i), q, 0, pts.back()});
  }
  inst.dist = euclidean_distances(pts);

  // Capacities grow geometrically; bigger vehicles are cheaper per unit of
  // capacity but cost more per distance.
  double cap = std::max(max_q, 2.5 * opt.max_demand);
  for (std::size_t u = 0; u < opt.vehicle_types; ++u) {
    VehicleType t;
    t.capacity = std::round(cap);
    t.fixed_cost = opt.fixed_costs ? std::round(20 + 1.2 * t.capacity * rng.uniform(0.9, 1.1)) : 0;
    t.unit_cost = opt.unit_variable_cost ? 1.0 : std::round(100 * (0.8 + 0.2 * static_cast<double>(u)) * rng.uniform(0.95, 1.05)) / 100;
    inst.fleet.push_back(t);
    cap *= 1.7;
  }
  if (opt.limited_fleet) {
    const double need = 1.2 * inst.total_demand();
    double have = 0;
    for (auto& t : inst.fleet) t.count = 0;
    // Round-robin over types until the fleet covers the demand with slack.
    for (std::size_t u = 0; have < need; u = (u + 1) % inst.fleet.size()) {
      ++*inst.fleet[u].count;
      have += inst.fleet[u].capacity;
    }
  }
  validate(inst);
  return inst;
}

}  // namespace minereduce
