#pragma once

// Iterated local search with random variable neighbourhood descent.
//
// Every move is described as a concatenation of pieces of existing routes
// (optionally reversed). Forward and backward prefix sums of arc distances
// let a piece's internal distance be read in O(1) in either direction, so
// evaluation is exact on asymmetric matrices. Contracted vertices are moved
// as single customers; only their position in the route changes, never the
// orientation of what they stand for.
//
// After an inter-route move both touched routes are given the cheapest
// vehicle types that fit them and that the fleet still has.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "minereduce/model.hpp"
#include "minereduce/rng.hpp"

namespace minereduce {

enum class Neighborhood : std::uint8_t {
  Shift10,   // move one customer to another route
  Shift20,   // move two consecutive customers
  Swap11,    // exchange one customer for one
  Swap21,    // exchange two consecutive customers for one
  Swap22,    // exchange two for two
  Cross,     // exchange route tails
  TwoOpt,    // reverse a stretch inside one route
  OrOpt,     // relocate 1..3 consecutive customers inside one route
  Exchange,  // swap two customers inside one route
};

inline constexpr std::array<Neighborhood, 9> kAllNeighborhoods = {
    Neighborhood::Shift10, Neighborhood::Shift20, Neighborhood::Swap11,
    Neighborhood::Swap21,  Neighborhood::Swap22,  Neighborhood::Cross,
    Neighborhood::TwoOpt,  Neighborhood::OrOpt,   Neighborhood::Exchange};

inline constexpr bool is_inter_route(Neighborhood n) {
  return n != Neighborhood::TwoOpt && n != Neighborhood::OrOpt && n != Neighborhood::Exchange;
}

inline constexpr std::string_view to_string(Neighborhood n) {
  switch (n) {
    case Neighborhood::Shift10: return "shift(1,0)";
    case Neighborhood::Shift20: return "shift(2,0)";
    case Neighborhood::Swap11: return "swap(1,1)";
    case Neighborhood::Swap21: return "swap(2,1)";
    case Neighborhood::Swap22: return "swap(2,2)";
    case Neighborhood::Cross: return "cross";
    case Neighborhood::TwoOpt: return "2-opt";
    case Neighborhood::OrOpt: return "or-opt";
    case Neighborhood::Exchange: return "exchange";
  }
  return "?";
}

struct IlsParams {
  int beta = 5;
  std::vector<Neighborhood> neighborhoods{kAllNeighborhoods.begin(), kAllNeighborhoods.end()};
  // Recompute the full cost after every applied move and compare it with the
  // predicted delta. Always on in debug builds.
  bool verify_deltas = false;
};

// Consecutive non-improving perturbations tolerated by ils().
inline std::size_t max_iter_ils(std::size_t customers, std::size_t routes, int beta) {
  return customers + static_cast<std::size_t>(std::max(beta, 0)) * routes;
}

// A single neighbourhood move. Positions index the depot-bracketed sequence
// of a route: 0 is the leading depot, customers sit at 1..size.
struct Move {
  Neighborhood kind = Neighborhood::Shift10;
  std::size_t a = 0;  // first route
  std::size_t b = 0;  // second route (inter-route moves)
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t len = 1;  // block length for or-opt
};

struct MoveEval {
  double delta = 0;
  TypeIndex vehicle_a = 0;
  TypeIndex vehicle_b = 0;
};

class LocalSearchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Route pairs known to hold no improving move of some neighbourhood. A key
// hashes the neighbourhood, both routes' sequences and vehicles, and the
// fleet usage; those determine every move evaluation between the two
// routes, so skipping a recorded pair never changes which move a
// first-improvement scan finds. Valid for one instance only.
class ScanMemo {
 public:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  bool contains(std::uint64_t key) const { return keys_.contains(key); }
  void insert(std::uint64_t key) {
    if (keys_.size() >= kMaxKeys) keys_.clear();
    keys_.insert(key);
  }
  std::size_t size() const { return keys_.size(); }

 private:
  static constexpr std::size_t kMaxKeys = std::size_t{1} << 20;
  std::unordered_set<std::uint64_t> keys_;
};

// Mutable search state over one solution. Always carries one trailing empty
// route so that moves can open a new vehicle.
class RouteSearch {
 public:
  static constexpr TypeIndex kNoVehicle = std::numeric_limits<TypeIndex>::max();

  RouteSearch(const Instance& inst, const Solution& sol) : inst_(inst), used_(inst.fleet.size(), 0) {
    for (const auto& r : sol.routes) {
      if (r.customers.empty()) continue;
      RouteData data;
      data.vehicle = r.vehicle;
      data.seq.reserve(r.customers.size() + 2);
      data.seq.push_back(kDepot);
      data.seq.insert(data.seq.end(), r.customers.begin(), r.customers.end());
      data.seq.push_back(kDepot);
      refresh(data);
      ++used_[r.vehicle];
      routes_.push_back(std::move(data));
    }
    ensure_spare();
    for (const auto& v : inst.fleet) {
      if (v.unlimited()) continue;
      unlimited_fleet_ = false;
    }
  }

  double cost() const {
    double total = 0;
    for (const auto& r : routes_) total += r.cost;
    return total;
  }

  std::size_t route_count() const { return routes_.size() - 1; }  // excludes the spare
  std::size_t route_size(std::size_t r) const { return routes_[r].seq.size() - 2; }

  Solution solution() const {
    std::vector<Route> out;
    for (const auto& r : routes_) {
      if (r.seq.size() <= 2) continue;
      out.push_back({r.vehicle, {r.seq.begin() + 1, r.seq.end() - 1}});
    }
    return make_solution(inst_, std::move(out));
  }

  // Calls g(a, b) for every route pair that neighbourhood `n` scans, in scan
  // order; intra-route neighbourhoods use a == b. Stops early when g returns
  // true; returns whether it stopped.
  template <typename G>
  bool for_each_pair(Neighborhood n, G&& g) const {
    const std::size_t nr = routes_.size();
    switch (n) {
      case Neighborhood::Shift10:
      case Neighborhood::Shift20:
        for (std::size_t a = 0; a < nr; ++a)
          for (std::size_t b = 0; b < nr; ++b)
            if (a != b && g(a, b)) return true;
        return false;
      case Neighborhood::Swap11:
      case Neighborhood::Swap21:
      case Neighborhood::Swap22:
      case Neighborhood::Cross: {
        const bool ordered = n == Neighborhood::Swap21;
        for (std::size_t a = 0; a < nr; ++a)
          for (std::size_t b = ordered ? 0 : a + 1; b < nr; ++b)
            if (a != b && g(a, b)) return true;
        return false;
      }
      case Neighborhood::TwoOpt:
      case Neighborhood::OrOpt:
      case Neighborhood::Exchange:
        for (std::size_t a = 0; a < nr; ++a)
          if (g(a, a)) return true;
        return false;
    }
    return false;
  }

  // Calls f(move) for every move of kind `n` between routes a and b, in scan
  // order (positions ascending). Stops early when f returns true.
  template <typename F>
  bool for_each_move_in(Neighborhood n, std::size_t a, std::size_t b, F&& f) const {
    const std::size_t sa = routes_[a].seq.size(), sb = routes_[b].seq.size();  // bracketed lengths
    switch (n) {
      case Neighborhood::Shift10:
      case Neighborhood::Shift20: {
        const std::size_t k = n == Neighborhood::Shift10 ? 1 : 2;
        for (std::size_t i = 1; i + k <= sa - 1; ++i)
          for (std::size_t j = 0; j + 1 < sb; ++j)
            if (f(Move{n, a, b, i, j, k})) return true;
        return false;
      }
      case Neighborhood::Swap11:
      case Neighborhood::Swap21:
      case Neighborhood::Swap22: {
        const auto [ka, kb] = block_sizes(n);
        for (std::size_t i = 1; i + ka <= sa - 1; ++i)
          for (std::size_t j = 1; j + kb <= sb - 1; ++j)
            if (f(Move{n, a, b, i, j, 1})) return true;
        return false;
      }
      case Neighborhood::Cross:
        for (std::size_t i = 0; i + 1 < sa; ++i)
          for (std::size_t j = 0; j + 1 < sb; ++j) {
            if (i == 0 && j == 0) continue;
            if (i + 2 == sa && j + 2 == sb) continue;
            if (f(Move{n, a, b, i, j, 1})) return true;
          }
        return false;
      case Neighborhood::TwoOpt:
      case Neighborhood::Exchange:
        for (std::size_t i = 1; i + 1 < sa; ++i)
          for (std::size_t j = i + 1; j + 1 < sa; ++j)
            if (f(Move{n, a, a, i, j, 1})) return true;
        return false;
      case Neighborhood::OrOpt:
        for (std::size_t k = 1; k <= 3; ++k)
          for (std::size_t i = 1; i + k <= sa - 1; ++i)
            for (std::size_t p = 0; p + 1 < sa; ++p) {
              if (p + 1 >= i && p < i + k) continue;  // no-op positions
              if (f(Move{n, a, a, i, p, k})) return true;
            }
        return false;
    }
    return false;
  }

  // Calls f(move) for every move of kind `n` in scan order (route pair, then
  // position). Stops early when f returns true; returns whether it stopped.
  template <typename F>
  bool for_each_move(Neighborhood n, F&& f) const {
    return for_each_pair(n, [&](std::size_t a, std::size_t b) { return for_each_move_in(n, a, b, f); });
  }

  // Cost change of `m` with the best feasible vehicle assignment, or nullopt
  // when the move breaks capacity or fleet limits.
  std::optional<MoveEval> evaluate(const Move& m) const {
    Pieces pa, pb;
    build(m, pa, pb);
    const RouteData& ra = routes_[m.a];
    const Span sa = measure(pa);
    if (!is_inter_route(m.kind)) {
      if (sa.empty) return std::nullopt;
      const double after = type_cost(ra.vehicle, sa.travel);
      return MoveEval{after - ra.cost, ra.vehicle, ra.vehicle};
    }
    const RouteData& rb = routes_[m.b];
    const Span sb = measure(pb);
    const double qmax = max_capacity();
    if (sa.load > qmax || sb.load > qmax) return std::nullopt;
    const double before = ra.cost + rb.cost;
    auto best = assign_pair(sa, sb, ra.vehicle, rb.vehicle);
    if (!best) return std::nullopt;
    best->delta -= before;
    return best;
  }

  void apply(const Move& m, const MoveEval& e) {
    const double predicted = cost() + e.delta;
    Pieces pa, pb;
    build(m, pa, pb);
    std::vector<VertexId> seq_a = flatten(pa);
    if (!is_inter_route(m.kind)) {
      routes_[m.a].seq = std::move(seq_a);
      refresh(routes_[m.a]);
    } else {
      std::vector<VertexId> seq_b = flatten(pb);
      set_route(m.a, std::move(seq_a), e.vehicle_a);
      set_route(m.b, std::move(seq_b), e.vehicle_b);
      compact();
    }
#ifdef NDEBUG
    const bool verify = verify_;
#else
    const bool verify = true;
#endif
    if (verify) {
      const double actual = solution().cost;
      if (std::abs(actual - predicted) > 1e-9 * std::max(1.0, std::abs(actual)))
        throw LocalSearchError("move delta disagrees with full recomputation");
    }
  }

  void set_verify(bool on) { verify_ = on; }

  // First-improvement scan of one neighbourhood. Returns true if a move was
  // applied. Route pairs recorded in `memo` are skipped, and pairs found to
  // hold no improving move are recorded.
  bool improve(Neighborhood n, ScanMemo* memo = nullptr) {
    std::optional<std::pair<Move, MoveEval>> found;
    const std::uint64_t usage = memo ? usage_hash() : 0;
    for_each_pair(n, [&](std::size_t a, std::size_t b) {
      std::uint64_t key = 0;
      if (memo) {
        key = ScanMemo::mix(ScanMemo::mix(ScanMemo::mix(usage ^ static_cast<std::uint64_t>(n)) ^ routes_[a].hash) ^
                            routes_[b].hash);
        if (memo->contains(key)) return false;
      }
      for_each_move_in(n, a, b, [&](const Move& m) {
        auto e = evaluate(m);
        if (e && e->delta < -kCostTolerance) {
          found.emplace(m, *e);
          return true;
        }
        return false;
      });
      if (found) return true;
      if (memo) memo->insert(key);
      return false;
    });
    if (!found) return false;
    apply(found->first, found->second);
    return true;
  }

  // Double-bridge style reordering of one random route with at least two
  // customers: A B C D becomes A C B D. Returns false if no route qualifies.
  bool perturb_intra(Rng& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t r = 0; r < routes_.size(); ++r)
      if (route_size(r) >= 2) candidates.push_back(r);
    if (candidates.empty()) return false;
    RouteData& route = routes_[candidates[rng.below(candidates.size())]];
    const std::size_t n = route.seq.size() - 2;
    // Cut points 0 <= p1 < p2 < p3 <= n over the customer list.
    std::size_t p1, p2, p3;
    do {
      p1 = rng.below(n + 1);
      p2 = rng.below(n + 1);
      p3 = rng.below(n + 1);
      std::array<std::size_t, 3> cut{p1, p2, p3};
      std::sort(cut.begin(), cut.end());
      p1 = cut[0];
      p2 = cut[1];
      p3 = cut[2];
    } while (p1 == p2 || p2 == p3);
    std::vector<VertexId> customers(route.seq.begin() + 1, route.seq.end() - 1);
    std::vector<VertexId> out(customers.begin(), customers.begin() + static_cast<std::ptrdiff_t>(p1));
    out.insert(out.end(), customers.begin() + static_cast<std::ptrdiff_t>(p2),
               customers.begin() + static_cast<std::ptrdiff_t>(p3));
    out.insert(out.end(), customers.begin() + static_cast<std::ptrdiff_t>(p1),
               customers.begin() + static_cast<std::ptrdiff_t>(p2));
    out.insert(out.end(), customers.begin() + static_cast<std::ptrdiff_t>(p3), customers.end());
    route.seq.assign(1, kDepot);
    route.seq.insert(route.seq.end(), out.begin(), out.end());
    route.seq.push_back(kDepot);
    refresh(route);
    return true;
  }

  // Applies one uniformly chosen feasible inter-route Shift(1,0) move.
  bool perturb_shift(Rng& rng) {
    std::vector<std::pair<Move, MoveEval>> feasible;
    for_each_move(Neighborhood::Shift10, [&](const Move& m) {
      if (auto e = evaluate(m)) feasible.emplace_back(m, *e);
      return false;
    });
    if (feasible.empty()) return false;
    const auto& [m, e] = feasible[rng.below(feasible.size())];
    apply(m, e);
    return true;
  }

 private:
  struct RouteData {
    TypeIndex vehicle = kNoVehicle;
    std::vector<VertexId> seq;  // depot-bracketed
    std::vector<double> fwd;    // fwd[k]: distance along seq[0..k]
    std::vector<double> bwd;    // bwd[k]: distance along seq[k..0] travelled backwards
    std::vector<double> load;   // inclusive prefix of demands
    std::vector<double> len;    // inclusive prefix of vertex lengths
    double travel = 0;
    double cost = 0;
    std::uint64_t hash = 0;     // of seq and vehicle
  };

  struct Piece {
    const RouteData* route = nullptr;
    std::size_t from = 0;  // inclusive positions, from <= to
    std::size_t to = 0;
    bool reversed = false;
  };

  struct Pieces {
    std::array<Piece, 5> items;
    std::size_t count = 0;
    void add(const RouteData& r, std::size_t from, std::size_t to, bool rev = false) {
      if (from > to) return;
      items[count++] = Piece{&r, from, to, rev};
    }
  };

  struct Span {
    double travel = 0;
    double load = 0;
    bool empty = true;
  };

  static std::pair<std::size_t, std::size_t> block_sizes(Neighborhood n) {
    switch (n) {
      case Neighborhood::Swap21: return {2, 1};
      case Neighborhood::Swap22: return {2, 2};
      default: return {1, 1};
    }
  }

  double max_capacity() const {
    if (qmax_ < 0) qmax_ = inst_.max_capacity();
    return qmax_;
  }

  double type_cost(TypeIndex u, double travel) const {
    return inst_.fleet[u].fixed_cost + inst_.fleet[u].unit_cost * travel;
  }

  void refresh(RouteData& r) const {
    const std::size_t n = r.seq.size();
    r.fwd.assign(n, 0);
    r.bwd.assign(n, 0);
    r.load.assign(n, 0);
    r.len.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const VertexId v = r.seq[k];
      r.load[k] = (k ? r.load[k - 1] : 0) + inst_.demand(v);
      r.len[k] = (k ? r.len[k - 1] : 0) + inst_.length(v);
      if (k) {
        r.fwd[k] = r.fwd[k - 1] + inst_.dist(r.seq[k - 1], v);
        r.bwd[k] = r.bwd[k - 1] + inst_.dist(v, r.seq[k - 1]);
      }
    }
    r.travel = r.fwd[n - 1] + r.len[n - 1];
    if (n <= 2) {
      r.cost = 0;
      r.vehicle = kNoVehicle;
    } else {
      r.cost = type_cost(r.vehicle, r.travel);
    }
    r.hash = ScanMemo::mix(r.vehicle);
    for (VertexId v : r.seq) r.hash = ScanMemo::mix(r.hash ^ static_cast<std::uint64_t>(v));
  }

  // Fleet usage only matters to evaluation when some type is limited.
  std::uint64_t usage_hash() const {
    if (unlimited_fleet_) return 0;
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t u : used_) h = ScanMemo::mix(h ^ u);
    return h;
  }

  Span measure(const Pieces& ps) const {
    Span s;
    double dist = 0, len = 0;
    VertexId prev = -1;
    for (std::size_t k = 0; k < ps.count; ++k) {
      const Piece& p = ps.items[k];
      const RouteData& r = *p.route;
      const VertexId first = p.reversed ? r.seq[p.to] : r.seq[p.from];
      const VertexId last = p.reversed ? r.seq[p.from] : r.seq[p.to];
      if (prev >= 0) dist += inst_.dist(prev, first);
      dist += p.reversed ? r.bwd[p.to] - r.bwd[p.from] : r.fwd[p.to] - r.fwd[p.from];
      const double load_before = p.from ? r.load[p.from - 1] : 0;
      const double len_before = p.from ? r.len[p.from - 1] : 0;
      s.load += r.load[p.to] - load_before;
      len += r.len[p.to] - len_before;
      for (std::size_t q = p.from; q <= p.to && s.empty; ++q)
        if (r.seq[q] != kDepot) s.empty = false;
      prev = last;
    }
    s.travel = dist + len;
    return s;
  }

  static std::vector<VertexId> flatten(const Pieces& ps) {
    std::vector<VertexId> seq;
    for (std::size_t k = 0; k < ps.count; ++k) {
      const Piece& p = ps.items[k];
      const auto& src = p.route->seq;
      if (p.reversed)
        for (std::size_t q = p.to + 1; q-- > p.from;) seq.push_back(src[q]);
      else
        seq.insert(seq.end(), src.begin() + static_cast<std::ptrdiff_t>(p.from),
                   src.begin() + static_cast<std::ptrdiff_t>(p.to) + 1);
    }
    return seq;
  }

  void build(const Move& m, Pieces& pa, Pieces& pb) const {
    const RouteData& A = routes_[m.a];
    const std::size_t la = A.seq.size() - 1;  // index of trailing depot
    switch (m.kind) {
      case Neighborhood::Shift10:
      case Neighborhood::Shift20: {
        const RouteData& B = routes_[m.b];
        const std::size_t lb = B.seq.size() - 1;
        const std::size_t k = m.len;
        pa.add(A, 0, m.i - 1);
        pa.add(A, m.i + k, la);
        pb.add(B, 0, m.j);
        pb.add(A, m.i, m.i + k - 1);
        pb.add(B, m.j + 1, lb);
        return;
      }
      case Neighborhood::Swap11:
      case Neighborhood::Swap21:
      case Neighborhood::Swap22: {
        const RouteData& B = routes_[m.b];
        const std::size_t lb = B.seq.size() - 1;
        const auto [ka, kb] = block_sizes(m.kind);
        pa.add(A, 0, m.i - 1);
        pa.add(B, m.j, m.j + kb - 1);
        pa.add(A, m.i + ka, la);
        pb.add(B, 0, m.j - 1);
        pb.add(A, m.i, m.i + ka - 1);
        pb.add(B, m.j + kb, lb);
        return;
      }
      case Neighborhood::Cross: {
        const RouteData& B = routes_[m.b];
        const std::size_t lb = B.seq.size() - 1;
        pa.add(A, 0, m.i);
        pa.add(B, m.j + 1, lb);
        pb.add(B, 0, m.j);
        pb.add(A, m.i + 1, la);
        return;
      }
      case Neighborhood::TwoOpt:
        pa.add(A, 0, m.i - 1);
        pa.add(A, m.i, m.j, true);
        pa.add(A, m.j + 1, la);
        return;
      case Neighborhood::OrOpt: {
        const std::size_t k = m.len, i = m.i, p = m.j;
        if (p < i) {
          pa.add(A, 0, p);
          pa.add(A, i, i + k - 1);
          pa.add(A, p + 1, i - 1);
          pa.add(A, i + k, la);
        } else {
          pa.add(A, 0, i - 1);
          pa.add(A, i + k, p);
          pa.add(A, i, i + k - 1);
          pa.add(A, p + 1, la);
        }
        return;
      }
      case Neighborhood::Exchange:
        pa.add(A, 0, m.i - 1);
        pa.add(A, m.j, m.j);
        pa.add(A, m.i + 1, m.j - 1);
        pa.add(A, m.i, m.i);
        pa.add(A, m.j + 1, la);
        return;
    }
  }

  std::size_t spare_count(TypeIndex u, TypeIndex released_a, TypeIndex released_b) const {
    const auto& count = inst_.fleet[u].count;
    if (!count) return std::numeric_limits<std::size_t>::max();
    std::size_t avail = *count - used_[u];
    if (released_a == u) ++avail;
    if (released_b == u) ++avail;
    return avail;
  }

  // Cheapest joint vehicle choice for two rewritten routes, given that the
  // vehicles currently on them (old_a, old_b) are released.
  std::optional<MoveEval> assign_pair(const Span& sa, const Span& sb, TypeIndex old_a, TypeIndex old_b) const {
    const std::size_t m = inst_.fleet.size();
    std::optional<MoveEval> best;
    const std::size_t ua_end = sa.empty ? 1 : m;
    const std::size_t ub_end = sb.empty ? 1 : m;
    for (std::size_t ua = 0; ua < ua_end; ++ua) {
      if (!sa.empty && inst_.fleet[ua].capacity < sa.load) continue;
      const double ca = sa.empty ? 0 : type_cost(ua, sa.travel);
      for (std::size_t ub = 0; ub < ub_end; ++ub) {
        if (!sb.empty && inst_.fleet[ub].capacity < sb.load) continue;
        const TypeIndex va = sa.empty ? kNoVehicle : ua;
        const TypeIndex vb = sb.empty ? kNoVehicle : ub;
        if (!unlimited_fleet_) {
          if (va != kNoVehicle && spare_count(va, old_a, old_b) < (va == vb ? 2u : 1u)) continue;
          if (vb != kNoVehicle && vb != va && spare_count(vb, old_a, old_b) < 1) continue;
        }
        const double total = ca + (sb.empty ? 0 : type_cost(ub, sb.travel));
        if (!best || total < best->delta) best = MoveEval{total, va, vb};
      }
    }
    return best;
  }

  void set_route(std::size_t r, std::vector<VertexId> seq, TypeIndex vehicle) {
    RouteData& route = routes_[r];
    if (route.vehicle != kNoVehicle) --used_[route.vehicle];
    route.seq = std::move(seq);
    route.vehicle = route.seq.size() > 2 ? vehicle : kNoVehicle;
    if (route.vehicle != kNoVehicle) ++used_[route.vehicle];
    refresh(route);
  }

  // Drops emptied routes and keeps exactly one trailing spare.
  void compact() {
    std::erase_if(routes_, [](const RouteData& r) { return r.seq.size() <= 2; });
    ensure_spare();
  }

  void ensure_spare() {
    RouteData spare;
    spare.seq = {kDepot, kDepot};
    refresh(spare);
    routes_.push_back(std::move(spare));
  }

  const Instance& inst_;
  std::vector<RouteData> routes_;
  std::vector<std::size_t> used_;
  bool unlimited_fleet_ = true;
  bool verify_ = false;
  mutable double qmax_ = -1;
};

// Random variable neighbourhood descent to a local optimum of every enabled
// neighbourhood.
inline Solution rvnd_descent(const Instance& inst, const Solution& sol, Rng& rng, const IlsParams& params = {},
                             ScanMemo* memo = nullptr) {
  RouteSearch search(inst, sol);
  search.set_verify(params.verify_deltas);
  std::vector<Neighborhood> order = params.neighborhoods;
  rng.shuffle(order);
  std::size_t k = 0;
  while (k < order.size()) {
    if (search.improve(order[k], memo)) {
      rng.shuffle(order);
      k = 0;
    } else {
      ++k;
    }
  }
  Solution out = search.solution();
  // Never hand back something worse because of round-off in the deltas.
  return out.cost <= sol.cost ? out : sol;
}

// Either a double-bridge reordering of one route or two random feasible
// Shift(1,0) moves, chosen with equal probability; each falls back to the
// other when it cannot be applied.
inline Solution perturb(const Instance& inst, const Solution& sol, Rng& rng) {
  RouteSearch search(inst, sol);
  const bool intra_first = rng.chance(0.5);
  if (intra_first) {
    if (!search.perturb_intra(rng)) {
      if (search.perturb_shift(rng)) search.perturb_shift(rng);
    }
  } else {
    if (search.perturb_shift(rng)) {
      search.perturb_shift(rng);
    } else {
      search.perturb_intra(rng);
    }
  }
  return search.solution();
}

inline Solution ils(const Instance& inst, const Solution& start, const IlsParams& params, Rng& rng) {
  const std::size_t limit = max_iter_ils(inst.customer_count(), start.route_count(), params.beta);
  ScanMemo memo;
  Solution best = rvnd_descent(inst, start, rng, params, &memo);
  std::size_t idle = 0;
  while (idle < limit) {
    Solution candidate = rvnd_descent(inst, perturb(inst, best, rng), rng, params, &memo);
    if (improves(candidate.cost, best.cost)) {
      best = std::move(candidate);
      idle = 0;
    } else {
      ++idle;
    }
  }
  return best;
}

}  // namespace minereduce
