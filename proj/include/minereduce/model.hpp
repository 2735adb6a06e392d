#pragma once

// Heterogeneous-fleet VRP data model.
//
// Instances use the extended formulation in which every customer vertex may
// carry a length l_i: the distance travelled inside the vertex when it stands
// for a contracted route segment. A route (R, u) then costs
//
//   f_u + r_u * (sum of traversed arc distances + sum of l_i over visited i)
//
// which is the classical HFVRP cost whenever all lengths are zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace minereduce {

using VertexId = std::int32_t;
using TypeIndex = std::size_t;

inline constexpr VertexId kDepot = 0;

// Two solution costs differ only if they differ by more than this.
inline constexpr double kCostTolerance = 1e-6;

inline bool improves(double candidate, double incumbent) {
  return candidate < incumbent - kCostTolerance;
}

// Broken structural precondition: bad vertex or vehicle index, overlapping
// segments, inconsistent maps.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke an API precondition (empty pattern list, mismatched inputs).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VehicleType {
  double capacity = 0;    // Q_u
  double fixed_cost = 0;  // f_u
  double unit_cost = 1;   // r_u, per unit distance
  // m_u; empty means an unlimited supply (fleet size and mix).
  std::optional<std::size_t> count;

  bool unlimited() const { return !count.has_value(); }
  bool operator==(const VehicleType&) const = default;
};

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct Node {
  VertexId id = 0;
  double demand = 0;  // q_i
  double length = 0;  // l_i, nonzero only for contracted vertices
  std::optional<Point> coords;
  bool operator==(const Node&) const = default;
};

// Dense row-major (n+1) x (n+1) matrix. Not assumed symmetric.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t dim, double fill = 0.0) : dim_(dim), data_(dim * dim, fill) {}

  std::size_t dim() const { return dim_; }
  double operator()(VertexId from, VertexId to) const {
    return data_[static_cast<std::size_t>(from) * dim_ + static_cast<std::size_t>(to)];
  }
  double& at(VertexId from, VertexId to) {
    return data_[static_cast<std::size_t>(from) * dim_ + static_cast<std::size_t>(to)];
  }
  std::span<const double> row(VertexId from) const {
    return {data_.data() + static_cast<std::size_t>(from) * dim_, dim_};
  }
  std::span<const double> raw() const { return data_; }

  bool operator==(const DistanceMatrix&) const = default;

  bool symmetric() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (data_[i * dim_ + j] != data_[j * dim_ + i]) return false;
    return true;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

inline DistanceMatrix euclidean_distances(std::span<const Point> points) {
  DistanceMatrix dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (i != j)
        dist.at(static_cast<VertexId>(i), static_cast<VertexId>(j)) =
            std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
  return dist;
}

struct Instance {
  std::string name;
  std::vector<Node> nodes;  // nodes[0] is the depot
  DistanceMatrix dist;
  std::vector<VehicleType> fleet;

  std::size_t customer_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  std::size_t vertex_count() const { return nodes.size(); }
  double demand(VertexId i) const { return nodes[static_cast<std::size_t>(i)].demand; }
  double length(VertexId i) const { return nodes[static_cast<std::size_t>(i)].length; }
  bool valid_customer(VertexId i) const {
    return i >= 1 && static_cast<std::size_t>(i) < nodes.size();
  }

  double total_demand() const {
    double total = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) total += nodes[i].demand;
    return total;
  }

  double max_capacity() const {
    double best = 0;
    for (const auto& v : fleet) best = std::max(best, v.capacity);
    return best;
  }

  bool fleet_limited() const {
    return std::all_of(fleet.begin(), fleet.end(), [](const VehicleType& v) { return !v.unlimited(); });
  }

  // False when every vehicle type has a finite count and together they
  // cannot carry the total demand, or when some customer fits no vehicle.
  bool capacity_sufficient() const {
    const double qmax = max_capacity();
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (nodes[i].demand > qmax) return false;
    if (!fleet_limited()) return !fleet.empty();
    double total = 0;
    for (const auto& v : fleet) total += v.capacity * static_cast<double>(*v.count);
    return total_demand() <= total;
  }

  bool operator==(const Instance&) const = default;
};

// Throws StructuralError on the first broken invariant.
inline void validate(const Instance& inst) {
  if (inst.nodes.empty()) throw StructuralError("instance has no depot");
  if (inst.fleet.empty()) throw StructuralError("instance has no vehicle types");
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    const Node& node = inst.nodes[i];
    if (node.id != static_cast<VertexId>(i))
      throw StructuralError("node ids must be contiguous from 0; found " + std::to_string(node.id) +
                            " at position " + std::to_string(i));
    if (node.demand < 0) throw StructuralError("negative demand at node " + std::to_string(i));
    if (node.length < 0) throw StructuralError("negative length at node " + std::to_string(i));
  }
  if (inst.nodes[0].demand != 0 || inst.nodes[0].length != 0)
    throw StructuralError("depot must have zero demand and length");
  if (inst.dist.dim() != inst.nodes.size()) throw StructuralError("distance matrix dimension mismatch");
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    const auto row = inst.dist.row(static_cast<VertexId>(i));
    if (row[i] != 0) throw StructuralError("nonzero self distance at node " + std::to_string(i));
    for (double d : row)
      if (!(d >= 0) || !std::isfinite(d)) throw StructuralError("invalid distance in row " + std::to_string(i));
  }
  for (std::size_t u = 0; u < inst.fleet.size(); ++u) {
    const auto& v = inst.fleet[u];
    if (!(v.capacity > 0)) throw StructuralError("vehicle type " + std::to_string(u) + " has nonpositive capacity");
    if (v.fixed_cost < 0 || v.unit_cost < 0)
      throw StructuralError("vehicle type " + std::to_string(u) + " has a negative cost");
  }
}

struct Route {
  TypeIndex vehicle = 0;
  std::vector<VertexId> customers;  // depot implicit at both ends

  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;
  double cost = 0;

  std::size_t route_count() const { return routes.size(); }
  bool operator==(const Solution&) const = default;
};

// A directed customer path with an assigned vehicle type, as assembled from a
// mined pattern. The depot flags record whether the pattern also fixed the
// arc from (to) the depot at the path's start (end).
struct Segment {
  std::vector<VertexId> customers;
  TypeIndex vehicle = 0;
  bool from_depot = false;
  bool to_depot = false;

  bool operator==(const Segment&) const = default;
};

namespace detail {

inline void check_route(const Instance& inst, const Route& route) {
  if (route.vehicle >= inst.fleet.size())
    throw StructuralError("route references vehicle type " + std::to_string(route.vehicle) + " of " +
                          std::to_string(inst.fleet.size()));
  for (VertexId c : route.customers)
    if (!inst.valid_customer(c)) throw StructuralError("route references invalid customer " + std::to_string(c));
}

}  // namespace detail

// Arc distances depot -> c1 -> ... -> ck -> depot plus internal lengths.
inline double route_travel(const Instance& inst, std::span<const VertexId> customers) {
  if (customers.empty()) return 0;
  double travel = inst.dist(kDepot, customers.front()) + inst.dist(customers.back(), kDepot);
  for (std::size_t k = 0; k + 1 < customers.size(); ++k) travel += inst.dist(customers[k], customers[k + 1]);
  for (VertexId c : customers) travel += inst.length(c);
  return travel;
}

inline double route_load(const Instance& inst, const Route& route) {
  detail::check_route(inst, route);
  double load = 0;
  for (VertexId c : route.customers) load += inst.demand(c);
  return load;
}

inline double route_cost(const Instance& inst, const Route& route) {
  detail::check_route(inst, route);
  const auto& v = inst.fleet[route.vehicle];
  return v.fixed_cost + v.unit_cost * route_travel(inst, route.customers);
}

inline double solution_cost(const Instance& inst, const Solution& sol) {
  double total = 0;
  for (const auto& r : sol.routes) total += route_cost(inst, r);
  return total;
}

// Builds a solution with its cost cache filled in; drops empty routes.
inline Solution make_solution(const Instance& inst, std::vector<Route> routes) {
  Solution sol;
  for (auto& r : routes)
    if (!r.customers.empty()) sol.routes.push_back(std::move(r));
  sol.cost = solution_cost(inst, sol);
  return sol;
}

struct Violation {
  enum class Kind { Capacity, FleetSize, Missing, Duplicate, InvalidVertex, InvalidVehicle, EmptyRoute };

  Kind kind;
  // Capacity and EmptyRoute carry the vehicle type and the offending customer
  // sequence; FleetSize the vehicle type; coverage kinds the customer id.
  TypeIndex vehicle = 0;
  VertexId customer = 0;
  double amount = 0;  // load, route count or visit count
  double limit = 0;
  std::vector<VertexId> route;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.kind, a.vehicle, a.customer, a.amount, a.limit, a.route) <
           std::tie(b.kind, b.vehicle, b.customer, b.amount, b.limit, b.route);
  }
};

struct FeasibilityReport {
  std::vector<Violation> violations;  // sorted, so reports compare as sets

  bool feasible() const { return violations.empty(); }
  bool has(Violation::Kind kind) const {
    return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
  }
};

inline FeasibilityReport check_feasibility(const Instance& inst, const Solution& sol) {
  FeasibilityReport report;
  auto& out = report.violations;
  std::vector<std::size_t> visits(inst.vertex_count(), 0);
  std::vector<std::size_t> used(inst.fleet.size(), 0);

  for (const auto& r : sol.routes) {
    bool vehicle_ok = r.vehicle < inst.fleet.size();
    if (!vehicle_ok) out.push_back({Violation::Kind::InvalidVehicle, r.vehicle, 0, 0, 0, r.customers});
    if (r.customers.empty()) out.push_back({Violation::Kind::EmptyRoute, r.vehicle, 0, 0, 0, {}});
    double load = 0;
    for (VertexId c : r.customers) {
      if (!inst.valid_customer(c)) {
        out.push_back({Violation::Kind::InvalidVertex, 0, c, 0, 0, {}});
        continue;
      }
      ++visits[static_cast<std::size_t>(c)];
      load += inst.demand(c);
    }
    if (!vehicle_ok) continue;
    ++used[r.vehicle];
    const double cap = inst.fleet[r.vehicle].capacity;
    if (load > cap) out.push_back({Violation::Kind::Capacity, r.vehicle, 0, load, cap, r.customers});
  }
  for (std::size_t u = 0; u < inst.fleet.size(); ++u) {
    const auto& count = inst.fleet[u].count;
    if (count && used[u] > *count)
      out.push_back({Violation::Kind::FleetSize, u, 0, static_cast<double>(used[u]), static_cast<double>(*count), {}});
  }
  for (std::size_t i = 1; i < visits.size(); ++i) {
    if (visits[i] == 0)
      out.push_back({Violation::Kind::Missing, 0, static_cast<VertexId>(i), 0, 1, {}});
    else if (visits[i] > 1)
      out.push_back({Violation::Kind::Duplicate, 0, static_cast<VertexId>(i), static_cast<double>(visits[i]), 1, {}});
  }
  std::sort(out.begin(), out.end());
  return report;
}

inline bool is_feasible(const Instance& inst, const Solution& sol) { return check_feasibility(inst, sol).feasible(); }

}  // namespace minereduce
