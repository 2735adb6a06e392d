#pragma once

// Maximal frequent itemset mining over an FP-tree, FPmax style.
//
// Items are first ranked by descending support (ties by item order) and
// every transaction is inserted into the tree in rank order. The miner walks
// the header table bottom-up, building conditional trees; a branch is cut as
// soon as its head plus every item still frequent in its conditional base is
// contained in a maximal set already found. A conditional tree that is a
// single path yields its whole path as one candidate. Candidates that turn
// out to be subsets of later finds are filtered at the end, and supports are
// recounted on the raw transactions.
//
// Small databases with long, heavily overlapping transactions (an elite set
// of similar solutions) defeat that pruning. For those, every maximal set is
// the intersection of some min_count transactions that contain it, so the
// maximal members of the C(|T|, min_count) intersections are exactly the
// answer. The automatic choice takes this route while the subset count is
// small.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <iterator>
#include <numeric>
#include <set>
#include <span>
#include <vector>

namespace minereduce {

template <typename T>
struct FrequentItemset {
  std::vector<T> items;  // ascending
  std::size_t support = 0;

  bool operator==(const FrequentItemset&) const = default;
};

// ceil(fraction * transactions), guarded against round-off such as
// 0.7 * 10 = 7.000000000000001.
inline std::size_t min_support_count(double fraction, std::size_t transactions) {
  const double raw = fraction * static_cast<double>(transactions);
  const double count = std::ceil(raw - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(count));
}

enum class MiningMethod {
  Auto,           // intersections when C(|T|, min_count) is small, otherwise FP-tree
  FpTree,
  Intersections,
};

namespace detail {

// C(n, k), saturating at `cap`.
inline std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  std::size_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // c * (n - k + i) / i stays exact because c * (n - k + i) is divisible by i.
    if (c > cap / (n - k + i)) return cap;
    c = c * (n - k + i) / i;
  }
  return std::min(c, cap);
}

// Maximal sets among the intersections of every `k`-subset of `rows`
// (sorted id lists). Empty intersections are skipped.
inline std::vector<std::vector<int>> maximal_intersections(const std::vector<std::vector<int>>& rows, std::size_t k) {
  std::set<std::vector<int>> closed;
  std::vector<std::vector<int>> stack{{}};  // stack[d]: intersection of the first d chosen rows
  auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == k) {
      closed.insert(stack[depth]);
      return;
    }
    for (std::size_t r = start; r + (k - depth) <= rows.size(); ++r) {
      std::vector<int> next;
      if (depth == 0) {
        next = rows[r];
      } else {
        std::set_intersection(stack[depth].begin(), stack[depth].end(), rows[r].begin(), rows[r].end(),
                              std::back_inserter(next));
      }
      if (next.empty()) continue;
      if (stack.size() <= depth + 1) stack.resize(depth + 2);
      stack[depth + 1] = std::move(next);
      self(self, r + 1, depth + 1);
    }
  };
  if (k >= 1 && k <= rows.size()) dfs(dfs, 0, 0);

  std::vector<std::vector<int>> by_size(closed.begin(), closed.end());
  std::stable_sort(by_size.begin(), by_size.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<int>> maximal;
  for (auto& c : by_size) {
    bool contained = false;
    for (const auto& m : maximal)
      if (m.size() > c.size() && std::includes(m.begin(), m.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    if (!contained) maximal.push_back(std::move(c));
  }
  return maximal;
}

class FpTree {
 public:
  struct Node {
    int item = -1;
    std::size_t count = 0;
    int parent = -1;
    int next = -1;  // next node carrying the same item
    std::vector<int> children;
  };

  explicit FpTree(std::size_t item_count) : head_(item_count, -1), total_(item_count, 0) {
    nodes_.push_back(Node{});  // root
  }

  // `path` must be sorted by rank (ascending item id == descending support).
  void insert(std::span<const int> path, std::size_t count) {
    int at = 0;
    for (int item : path) {
      int child = -1;
      for (int c : nodes_[static_cast<std::size_t>(at)].children)
        if (nodes_[static_cast<std::size_t>(c)].item == item) {
          child = c;
          break;
        }
      if (child < 0) {
        child = static_cast<int>(nodes_.size());
        Node node;
        node.item = item;
        node.parent = at;
        node.next = head_[static_cast<std::size_t>(item)];
        head_[static_cast<std::size_t>(item)] = child;
        nodes_.push_back(std::move(node));
        nodes_[static_cast<std::size_t>(at)].children.push_back(child);
      }
      nodes_[static_cast<std::size_t>(child)].count += count;
      total_[static_cast<std::size_t>(item)] += count;
      at = child;
    }
  }

  bool empty() const { return nodes_.size() == 1; }

  // Items along the tree when it is a single chain; empty optional otherwise.
  bool single_path(std::vector<int>& items) const {
    items.clear();
    int at = 0;
    while (true) {
      const auto& kids = nodes_[static_cast<std::size_t>(at)].children;
      if (kids.empty()) return true;
      if (kids.size() > 1) return false;
      at = kids.front();
      items.push_back(nodes_[static_cast<std::size_t>(at)].item);
    }
  }

  std::size_t item_count() const { return head_.size(); }
  std::size_t total(int item) const { return total_[static_cast<std::size_t>(item)]; }
  int head(int item) const { return head_[static_cast<std::size_t>(item)]; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

 private:
  std::vector<Node> nodes_;
  std::vector<int> head_;
  std::vector<std::size_t> total_;
};

class MaximalMiner {
 public:
  MaximalMiner(std::size_t min_count) : min_count_(min_count) {}

  void run(const FpTree& tree, std::vector<int>& head) { mine(tree, head); }

  std::vector<std::vector<int>>& found() { return found_; }

 private:
  bool subsumed(const std::vector<int>& sorted) const {
    for (const auto& m : found_)
      if (m.size() >= sorted.size() && std::includes(m.begin(), m.end(), sorted.begin(), sorted.end())) return true;
    return false;
  }

  void record(std::vector<int> set) {
    std::sort(set.begin(), set.end());
    if (set.empty() || subsumed(set)) return;
    found_.push_back(std::move(set));
  }

  void mine(const FpTree& tree, std::vector<int>& head) {
    std::vector<int> path;
    if (tree.single_path(path)) {
      std::vector<int> set = head;
      for (int item : path)
        if (tree.total(item) >= min_count_) set.push_back(item);
      record(std::move(set));
      return;
    }
    // Bottom-up: least frequent (highest id) first.
    for (int item = static_cast<int>(tree.item_count()) - 1; item >= 0; --item) {
      if (tree.total(item) < min_count_) continue;

      // Conditional pattern base of `item`.
      std::vector<std::size_t> counts(tree.item_count(), 0);
      for (int n = tree.head(item); n >= 0; n = tree.node(n).next) {
        const std::size_t c = tree.node(n).count;
        for (int p = tree.node(n).parent; p > 0; p = tree.node(p).parent) counts[static_cast<std::size_t>(tree.node(p).item)] += c;
      }
      head.push_back(item);
      std::vector<int> tail;
      for (int other = 0; other < item; ++other)
        if (counts[static_cast<std::size_t>(other)] >= min_count_) tail.push_back(other);

      std::vector<int> candidate = head;
      candidate.insert(candidate.end(), tail.begin(), tail.end());
      std::sort(candidate.begin(), candidate.end());
      if (subsumed(candidate)) {
        head.pop_back();
        continue;
      }
      if (tail.empty()) {
        record(head);
        head.pop_back();
        continue;
      }

      FpTree cond(tree.item_count());
      std::vector<bool> keep(tree.item_count(), false);
      for (int t : tail) keep[static_cast<std::size_t>(t)] = true;
      std::vector<int> prefix;
      for (int n = tree.head(item); n >= 0; n = tree.node(n).next) {
        prefix.clear();
        for (int p = tree.node(n).parent; p > 0; p = tree.node(p).parent)
          if (keep[static_cast<std::size_t>(tree.node(p).item)]) prefix.push_back(tree.node(p).item);
        std::reverse(prefix.begin(), prefix.end());
        if (!prefix.empty()) cond.insert(prefix, tree.node(n).count);
      }
      mine(cond, head);
      head.pop_back();
    }
  }

  std::size_t min_count_;
  std::vector<std::vector<int>> found_;
};

}  // namespace detail

// Every itemset with support >= ceil(min_sup_fraction * |transactions|) that
// has no frequent proper superset. Output is sorted: by size descending, then
// lexicographically. Transactions may list items in any order; duplicates
// within one transaction are ignored. Every method gives the same result.
template <typename T>
std::vector<FrequentItemset<T>> mine_maximal_frequent(std::span<const std::vector<T>> transactions,
                                                      double min_sup_fraction,
                                                      MiningMethod method = MiningMethod::Auto) {
  std::vector<FrequentItemset<T>> result;
  if (transactions.empty()) return result;
  const std::size_t min_count = min_support_count(min_sup_fraction, transactions.size());

  // Dense ids ranked by descending support, ties by item order.
  std::map<T, std::size_t> support;
  std::vector<std::vector<T>> clean;
  clean.reserve(transactions.size());
  for (const auto& t : transactions) {
    std::vector<T> items = t;
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    for (const auto& item : items) ++support[item];
    clean.push_back(std::move(items));
  }
  std::vector<T> by_rank;
  for (const auto& [item, count] : support)
    if (count >= min_count) by_rank.push_back(item);
  std::stable_sort(by_rank.begin(), by_rank.end(),
                   [&](const T& a, const T& b) { return support.at(a) > support.at(b); });
  if (by_rank.empty()) return result;
  std::map<T, int> rank;
  for (std::size_t r = 0; r < by_rank.size(); ++r) rank.emplace(by_rank[r], static_cast<int>(r));

  std::vector<std::vector<int>> rows;
  rows.reserve(clean.size());
  for (const auto& t : clean) {
    std::vector<int> path;
    for (const auto& item : t)
      if (auto it = rank.find(item); it != rank.end()) path.push_back(it->second);
    std::sort(path.begin(), path.end());
    rows.push_back(std::move(path));
  }

  constexpr std::size_t kIntersectionBudget = 200000;
  if (method == MiningMethod::Auto)
    method = min_count <= rows.size() && detail::binomial_capped(rows.size(), min_count, kIntersectionBudget + 1) <=
                                             kIntersectionBudget
                 ? MiningMethod::Intersections
                 : MiningMethod::FpTree;

  std::vector<std::vector<int>> found;
  if (method == MiningMethod::Intersections) {
    found = detail::maximal_intersections(rows, min_count);
  } else {
    detail::FpTree tree(by_rank.size());
    for (const auto& path : rows)
      if (!path.empty()) tree.insert(path, 1);
    detail::MaximalMiner miner(min_count);
    std::vector<int> head;
    miner.run(tree, head);
    found = std::move(miner.found());
    // Drop any set that a later find contains.
    std::vector<bool> drop(found.size(), false);
    for (std::size_t a = 0; a < found.size(); ++a)
      for (std::size_t b = 0; b < found.size() && !drop[a]; ++b)
        if (a != b && found[b].size() > found[a].size() &&
            std::includes(found[b].begin(), found[b].end(), found[a].begin(), found[a].end()))
          drop[a] = true;
    std::vector<std::vector<int>> kept;
    for (std::size_t a = 0; a < found.size(); ++a)
      if (!drop[a]) kept.push_back(std::move(found[a]));
    found = std::move(kept);
  }

  for (const auto& ids : found) {
    FrequentItemset<T> set;
    for (int id : ids) set.items.push_back(by_rank[static_cast<std::size_t>(id)]);
    std::sort(set.items.begin(), set.items.end());
    for (const auto& t : clean)
      if (std::includes(t.begin(), t.end(), set.items.begin(), set.items.end())) ++set.support;
    result.push_back(std::move(set));
  }
  std::sort(result.begin(), result.end(), [](const FrequentItemset<T>& a, const FrequentItemset<T>& b) {
    if (a.items.size() != b.items.size()) return a.items.size() > b.items.size();
    return a.items < b.items;
  });
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

template <typename T>
std::vector<FrequentItemset<T>> mine_maximal_frequent(const std::vector<std::vector<T>>& transactions,
                                                      double min_sup_fraction,
                                                      MiningMethod method = MiningMethod::Auto) {
  return mine_maximal_frequent(std::span<const std::vector<T>>{transactions}, min_sup_fraction, method);
}

}  // namespace minereduce
