#pragma once

// Elite-set memory and pattern extraction for HFVRP solutions.
//
// A solution is encoded as a transaction: the set of (arc, vehicle type)
// items over all its routes, depot arcs included. Maximal frequent itemsets
// of the elite transactions are the patterns; each pattern decomposes into
// directed customer paths of a single vehicle type (segments).

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "minereduce/itemsets.hpp"
#include "minereduce/model.hpp"

namespace minereduce {

struct Item {
  VertexId from = 0;
  VertexId to = 0;
  TypeIndex vehicle = 0;

  friend bool operator==(const Item&, const Item&) = default;
  friend auto operator<=>(const Item& a, const Item& b) {
    return std::tie(a.from, a.to, a.vehicle) <=> std::tie(b.from, b.to, b.vehicle);
  }
};

using Transaction = std::vector<Item>;  // sorted, duplicate-free

inline std::ostream& operator<<(std::ostream& os, const Item& item) {
  return os << item.from << '>' << item.to << '@' << item.vehicle;
}

inline Transaction encode_transaction(const Solution& sol) {
  Transaction items;
  for (const auto& r : sol.routes) {
    if (r.customers.empty()) continue;
    VertexId prev = kDepot;
    for (VertexId c : r.customers) {
      items.push_back({prev, c, r.vehicle});
      prev = c;
    }
    items.push_back({prev, kDepot, r.vehicle});
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

// One transaction per line, items as "i>j@u" separated by spaces.
inline void write_transactions(std::ostream& os, std::span<const Transaction> transactions) {
  for (const auto& t : transactions) {
    for (std::size_t k = 0; k < t.size(); ++k) os << (k ? " " : "") << t[k];
    os << '\n';
  }
}

class EliteSet {
 public:
  struct Member {
    Solution solution;
    Transaction transaction;
  };

  explicit EliteSet(std::size_t capacity) : capacity_(capacity) {}

  // Inserts `candidate` if it is new (no member has the same transaction) and
  // either there is room or it beats the worst member, which it then evicts.
  bool update(const Solution& candidate, std::size_t iter) {
    if (capacity_ == 0) return false;
    const bool full = members_.size() >= capacity_;
    if (full && !(candidate.cost < members_.back().solution.cost)) return false;
    Transaction t = encode_transaction(candidate);
    for (const auto& m : members_)
      if (m.transaction == t) return false;
    if (full) members_.pop_back();
    auto pos = std::upper_bound(members_.begin(), members_.end(), candidate.cost,
                                [](double cost, const Member& m) { return cost < m.solution.cost; });
    members_.insert(pos, Member{candidate, std::move(t)});
    last_change_iter_ = iter;
    mined_since_change_ = false;
    return true;
  }

  void mark_mined() {
    mined_since_change_ = true;
    mined_ever_ = true;
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Member>& members() const { return members_; }
  std::size_t last_change_iter() const { return last_change_iter_; }
  bool mined_since_change() const { return mined_since_change_; }
  bool mined_ever() const { return mined_ever_; }

  std::vector<Transaction> transactions() const {
    std::vector<Transaction> out;
    out.reserve(members_.size());
    for (const auto& m : members_) out.push_back(m.transaction);
    return out;
  }

 private:
  std::size_t capacity_;
  std::vector<Member> members_;  // ascending cost
  std::size_t last_change_iter_ = 0;
  bool mined_since_change_ = false;
  bool mined_ever_ = false;
};

// Mining trigger, checked at the top of iteration `current_iter` (1-based).
// Before the first mining the set is stable once it went `delta` iterations
// without a change; afterwards it must also have changed since that mining.
// A set with fewer than two members is never stable.
inline bool is_stable(const EliteSet& elite, std::size_t delta, std::size_t current_iter) {
  if (elite.size() < 2) return false;
  if (elite.mined_since_change()) return false;
  return current_iter > elite.last_change_iter() + delta;
}

class MalformedPatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chains the customer-to-customer arcs of `items` into directed paths. Depot
// arcs do not join paths; they only mark a path as depot-anchored. Paths with
// fewer than two customers are dropped. Output is ordered by first customer.
inline std::vector<Segment> assemble_segments(std::span<const Item> items) {
  std::map<VertexId, const Item*> succ, pred;
  std::map<VertexId, TypeIndex> from_depot, to_depot;
  for (const auto& item : items) {
    if (item.from == item.to) throw MalformedPatternError("self loop on vertex " + std::to_string(item.from));
    if (item.from == kDepot) {
      from_depot.emplace(item.to, item.vehicle);
      continue;
    }
    if (item.to == kDepot) {
      to_depot.emplace(item.from, item.vehicle);
      continue;
    }
    if (!succ.emplace(item.from, &item).second)
      throw MalformedPatternError("vertex " + std::to_string(item.from) + " has two successors");
    if (!pred.emplace(item.to, &item).second)
      throw MalformedPatternError("vertex " + std::to_string(item.to) + " has two predecessors");
  }

  std::vector<Segment> segments;
  std::size_t consumed = 0;
  for (const auto& [start, first] : succ) {
    if (pred.contains(start)) continue;
    Segment seg;
    seg.vehicle = first->vehicle;
    seg.customers.push_back(start);
    VertexId at = start;
    for (auto it = succ.find(at); it != succ.end(); it = succ.find(at)) {
      if (it->second->vehicle != seg.vehicle)
        throw MalformedPatternError("path through vertex " + std::to_string(at) + " mixes vehicle types");
      at = it->second->to;
      seg.customers.push_back(at);
      ++consumed;
    }
    if (auto it = from_depot.find(start); it != from_depot.end() && it->second == seg.vehicle) seg.from_depot = true;
    if (auto it = to_depot.find(at); it != to_depot.end() && it->second == seg.vehicle) seg.to_depot = true;
    segments.push_back(std::move(seg));
  }
  if (consumed != succ.size()) throw MalformedPatternError("customer arcs contain a cycle");
  return segments;  // every chain has >= 2 customers by construction
}

struct Pattern {
  std::vector<Item> items;
  std::size_t support = 0;
  std::vector<Segment> segments;
};

// Circular list of patterns; the cursor starts at the largest.
class PatternList {
 public:
  PatternList() = default;
  explicit PatternList(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {}

  bool empty() const { return patterns_.empty(); }
  std::size_t size() const { return patterns_.size(); }
  std::size_t cursor() const { return cursor_; }
  const std::vector<Pattern>& patterns() const { return patterns_; }

  const Pattern& next() {
    if (patterns_.empty()) throw UsageError("next_pattern on an empty pattern list");
    const Pattern& p = patterns_[cursor_];
    cursor_ = (cursor_ + 1) % patterns_.size();
    return p;
  }

 private:
  std::vector<Pattern> patterns_;
  std::size_t cursor_ = 0;
};

inline const Pattern& next_pattern(PatternList& list) { return list.next(); }

// Keeps the max_p largest itemsets, ties broken by lexicographic item order,
// and assembles their segments.
inline PatternList select_patterns(std::vector<FrequentItemset<Item>> itemsets, std::size_t max_p) {
  std::stable_sort(itemsets.begin(), itemsets.end(), [](const auto& a, const auto& b) {
    if (a.items.size() != b.items.size()) return a.items.size() > b.items.size();
    return a.items < b.items;
  });
  if (itemsets.size() > max_p) itemsets.resize(max_p);
  std::vector<Pattern> patterns;
  patterns.reserve(itemsets.size());
  for (auto& set : itemsets) {
    Pattern p;
    p.segments = assemble_segments(set.items);
    p.items = std::move(set.items);
    p.support = set.support;
    patterns.push_back(std::move(p));
  }
  return PatternList(std::move(patterns));
}

// Mines the elite set and selects patterns in one step.
inline PatternList mine_patterns(const EliteSet& elite, std::size_t max_p, double min_sup) {
  const auto transactions = elite.transactions();
  return select_patterns(mine_maximal_frequent<Item>(transactions, min_sup), max_p);
}

// "<support>: i>j@u ..." per pattern.
inline void write_patterns(std::ostream& os, const PatternList& list) {
  for (const auto& p : list.patterns()) {
    os << p.support << ':';
    for (const auto& item : p.items) os << ' ' << item;
    os << '\n';
  }
}

}  // namespace minereduce
