// Acceptance checks, one per criterion. Prints a PASS/FAIL line for each
// criterion run and exits nonzero if any fails.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace minereduce;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome verdict(bool pass, std::string detail) { return {pass, std::move(detail)}; }

// 1: the reduced worked example has exactly the expected cluster values.
Outcome worked_reduction() {
  const Instance inst = worked_instance();
  const Reduction red = reduce_instance(inst, std::vector<Segment>{{{Dv, E, F}, 0, false, false}});
  const Instance& r = red.instance;
  if (r.customer_count() != 4) return verdict(false, "reduced instance should have 4 customers");
  const VertexId g = 4;
  struct Check {
    const char* name;
    double got, want;
  };
  const Check checks[] = {
      {"q_g", r.nodes[4].demand, 8}, {"l_g", r.nodes[4].length, 4}, {"d(D,g)", r.dist(0, g), 3},
      {"d(a,g)", r.dist(1, g), 5},   {"d(b,g)", r.dist(2, g), 4},   {"d(c,g)", r.dist(3, g), 3},
      {"d(g,D)", r.dist(g, 0), 1},   {"d(g,a)", r.dist(g, 1), 2},   {"d(g,b)", r.dist(g, 2), 2},
      {"d(g,c)", r.dist(g, 3), 4},
  };
  for (const auto& c : checks)
    if (c.got != c.want)
      return verdict(false, std::string(c.name) + " = " + std::to_string(c.got) + ", want " + std::to_string(c.want));
  if (red.map.expand(g) != std::vector<VertexId>{Dv, E, F}) return verdict(false, "cluster does not expand to d,e,f");
  return verdict(true, "all 10 values exact");
}

std::vector<Segment> random_segments(const Instance& inst, Rng& rng, std::size_t max_segments) {
  std::vector<VertexId> order;
  for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c) order.push_back(c);
  rng.shuffle(order);
  std::vector<Segment> segs;
  std::size_t k = 0;
  while (segs.size() < max_segments) {
    const std::size_t len = 2 + rng.below(4);
    if (k + len > order.size()) break;
    segs.push_back({{order.begin() + static_cast<long>(k), order.begin() + static_cast<long>(k + len)},
                    static_cast<TypeIndex>(rng.below(inst.fleet.size())), false, false});
    k += len + rng.below(3);
  }
  return segs;
}

// 2: expanding a reduced solution never changes its cost.
Outcome expansion_cost() {
  const std::size_t trials = 1200;
  double worst = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    RandomSpec spec;
    spec.customers = 5 + rng.below(26);
    spec.types = 1 + rng.below(4);
    spec.asymmetric = rng.chance(0.5);
    spec.lengths = rng.chance(0.3);
    spec.limited = rng.chance(0.3);
    spec.max_demand = 8;
    const Instance inst = random_instance(rng, spec);
    const Reduction red = reduce_instance(inst, random_segments(inst, rng, 1 + rng.below(5)));
    const Solution reduced = random_solution(red.instance, rng);
    const Solution full = expand_solution(inst, reduced, red.map);
    const double scale = std::max(1.0, std::abs(reduced.cost));
    worst = std::max({worst, std::abs(full.cost - reduced.cost) / scale,
                      std::abs(oracle_cost(inst, full) - reduced.cost) / scale});
    if (!close(full.cost, reduced.cost) || !close(oracle_cost(inst, full), reduced.cost))
      return verdict(false, "triple " + std::to_string(t) + ": expanded " + std::to_string(full.cost) +
                                " vs reduced " + std::to_string(reduced.cost));
  }
  std::ostringstream os;
  os << trials << " triples, worst relative error " << worst;
  return verdict(true, os.str());
}

// 3: the miner agrees with subset enumeration.
Outcome miner_oracle() {
  using Db = std::vector<std::vector<int>>;
  const std::size_t trials = 400;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(5000 + t);
    const int universe = 1 + static_cast<int>(rng.below(12));
    const std::size_t count = 1 + rng.below(8);
    const double density = rng.uniform(0.2, 0.95);
    Db db(count);
    for (auto& tx : db)
      for (int i = 0; i < universe; ++i)
        if (rng.chance(density)) tx.push_back(i);
    const double min_sup = 0.1 * static_cast<double>(2 + rng.below(9));

    const std::size_t need = min_support_count(min_sup, db.size());
    std::vector<std::uint32_t> masks;
    for (const auto& tx : db) {
      std::uint32_t m = 0;
      for (int i : tx) m |= 1u << i;
      masks.push_back(m);
    }
    std::vector<std::pair<std::uint32_t, std::size_t>> frequent;
    for (std::uint32_t s = 1; s < (1u << universe); ++s) {
      std::size_t support = 0;
      for (auto m : masks) support += (m & s) == s;
      if (support >= need) frequent.emplace_back(s, support);
    }
    std::vector<FrequentItemset<int>> expected;
    for (const auto& [s, support] : frequent) {
      bool maximal = true;
      for (const auto& [other, unused] : frequent) maximal = maximal && (other == s || (other & s) != s);
      if (!maximal) continue;
      FrequentItemset<int> set;
      for (int i = 0; i < universe; ++i)
        if (s & (1u << i)) set.items.push_back(i);
      set.support = support;
      expected.push_back(set);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      if (a.items.size() != b.items.size()) return a.items.size() > b.items.size();
      return a.items < b.items;
    });
    for (MiningMethod m : {MiningMethod::Auto, MiningMethod::FpTree, MiningMethod::Intersections})
      if (mine_maximal_frequent(db, min_sup, m) != expected)
        return verdict(false, "database " + std::to_string(t) + " differs from enumeration (method " +
                                  std::to_string(static_cast<int>(m)) + ")");
  }
  return verdict(true, std::to_string(trials) + " databases match, both mining methods");
}

// 4: ILS finds the exact optimum on tiny single-type instances.
Outcome small_optimality() {
  std::ostringstream os;
  bool pass = true;
  for (std::size_t n = 5; n <= 8; ++n) {
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng irng(100 * n + seed);
      Instance inst = random_instance(irng, {.customers = n, .types = 1});
      const double optimum = brute_force_optimum(inst);
      Rng rng(seed);
      const Solution s = ils(inst, generate_initial_solution(inst, rng), {}, rng);
      if (is_feasible(inst, s) && s.cost <= optimum + 1e-6) ++hits;
    }
    os << "n=" << n << ": " << hits << "/20 ";
    pass = pass && hits >= 18;
  }
  return verdict(pass, os.str());
}

// 5: best-of-20 on two published benchmark instances.
Outcome benchmark_anchors() {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("MINEREDUCE_DATA_DIR")) dirs.emplace_back(env);
  dirs.emplace_back("data");
  auto locate = [&](const std::string& id) -> std::optional<std::filesystem::path> {
    for (const auto& d : dirs)
      for (const char* ext : {".txt", ".hfvrp"})
        if (std::filesystem::exists(d / (id + ext))) return d / (id + ext);
    return std::nullopt;
  };
  struct Anchor {
    const char* id;
    double bks;
  };
  std::ostringstream os;
  bool pass = true;
  for (const Anchor a : {Anchor{"75", 452.85}, Anchor{"92", 564.39}}) {
    const auto path = locate(a.id);
    if (!path) {
      os << "instance " << a.id << " not found (looked for " << a.id << ".txt in $MINEREDUCE_DATA_DIR and data/) ";
      pass = false;
      continue;
    }
    std::ifstream in(*path);
    const Instance inst = read_instance(in);
    SolverParams p = SolverParams::defaults(Algorithm::MineReduce);
    p.seed = 1;
    const RunStats s = run_experiment(inst, p, 20);
    const double gap = 100.0 * (s.best_cost - a.bks) / a.bks;
    os << "instance " << a.id << ": best " << s.best_cost << " gap " << gap << "% ";
    pass = pass && gap <= 0.5;
  }
  return verdict(pass, os.str());
}

// 6: after the first mining, iterations get cheaper and faster.
Outcome mining_behaviour() {
  GeneratorOptions opt;
  opt.customers = 100;
  opt.vehicle_types = 3;
  Rng irng(2024);
  const Instance inst = generate_instance(opt, irng, "gen100");
  std::size_t good = 0;
  std::ostringstream os;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SolverParams p = SolverParams::defaults(Algorithm::MineReduce);
    p.seed = seed;
    const RunResult r = run(inst, p);
    std::size_t first = 0;
    for (const auto& rec : r.log)
      if (rec.mined_this_iter) {
        first = rec.iter;
        break;
      }
    if (first == 0) {
      os << "seed " << seed << ": never mined; ";
      continue;
    }
    double pre_t = 0, post_t = 0, pre_c = 0, post_c = 0;
    std::size_t pre = 0, post = 0;
    for (const auto& rec : r.log) {
      if (rec.iter < first) {
        pre_t += rec.gen_time + rec.ls_time;
        pre_c += rec.gen_cost;
        ++pre;
      } else {
        post_t += rec.gen_time + rec.ls_time;
        post_c += rec.gen_cost;
        ++post;
      }
    }
    if (pre == 0 || post == 0) continue;
    pre_t /= static_cast<double>(pre);
    post_t /= static_cast<double>(post);
    pre_c /= static_cast<double>(pre);
    post_c /= static_cast<double>(post);
    const bool ok = post_t < pre_t && post_c < pre_c;
    good += ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "seed %llu: mined@%zu time %.3f->%.3f cost %.1f->%.1f%s; ",
                  static_cast<unsigned long long>(seed), first, pre_t, post_t, pre_c, post_c, ok ? "" : " (no)");
    os << buf;
  }
  os << good << "/5 seeds improve";
  return verdict(good >= 3, os.str());
}

// 7: mining fires exactly where the stability rule says.
Outcome stability_rule() {
  std::size_t traces = 0;
  for (std::size_t capacity : {2u, 10u})
    for (std::size_t delta = 1; delta <= 3; ++delta)
      for (std::size_t len = 1; len <= 10; ++len)
        for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
          std::vector<bool> script(len);
          for (std::size_t k = 0; k < len; ++k) script[k] = (bits >> k) & 1u;
          ScriptedPhases phases(script);
          SolverParams p;
          p.algorithm = Algorithm::MineReduce;
          p.max_iter = len;
          p.delta = delta;
          p.elite_size = capacity;
          const auto result = multi_start(p, phases);
          std::vector<std::size_t> fired;
          for (const auto& r : result.log)
            if (r.mined_this_iter) fired.push_back(r.iter);
          ++traces;
          if (fired != reference_mining(script, delta, capacity) || fired != phases.mined_at)
            return verdict(false, "trace bits=" + std::to_string(bits) + " len=" + std::to_string(len) +
                                      " delta=" + std::to_string(delta));
        }
  return verdict(true, std::to_string(traces) + " traces match");
}

// 8: statistics against independent formulas, and TTT ordering.
Outcome statistics() {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> a, b;
    double apd_ref = 0, sum = 0, sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(rng.uniform(10, 1000));
      b.push_back(a.back() * rng.uniform(0.9, 1.1));
      apd_ref += (b.back() / a.back() - 1.0) * 100.0;
      const double d = a.back() - b.back();
      sum += d;
      sum_sq += d * d;
    }
    apd_ref /= static_cast<double>(n);
    const double nn = static_cast<double>(n);
    const double t_ref = (sum / nn) / std::sqrt((sum_sq - sum * sum / nn) / (nn - 1) / nn);
    if (!close(apd(a, b), apd_ref)) return verdict(false, "apd mismatch in trial " + std::to_string(trial));
    if (!close(paired_t_test(a, b).t, t_ref)) return verdict(false, "t mismatch in trial " + std::to_string(trial));
  }
  Rng irng(3);
  const Instance inst = random_instance(irng, {.customers = 15, .types = 2});
  SolverParams p = SolverParams::defaults(Algorithm::MineReduce);
  p.max_iter = 20;
  const RunStats s = run_experiment(inst, p, 8);
  double worst = 0;
  for (const auto& r : s.per_run) worst = std::max(worst, r.cost);
  const TttResult ttt = ttt_run(inst, p, worst, 8);
  if (ttt.times.size() != 8) return verdict(false, "TTT: expected every run to reach the target");
  if (!std::is_sorted(ttt.times.begin(), ttt.times.end())) return verdict(false, "TTT times not sorted");
  for (std::size_t i = 0; i < ttt.probabilities.size(); ++i) {
    const double q = ttt.probabilities[i];
    if (!(q > 0 && q < 1) || (i && !(q > ttt.probabilities[i - 1])))
      return verdict(false, "TTT probabilities not strictly increasing in (0,1)");
  }
  return verdict(true, "500 randomized apd/t checks, TTT ordered");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{worked_reduction, expansion_cost,   miner_oracle,
                                                       small_optimality, benchmark_anchors, mining_behaviour,
                                                       stability_rule,   statistics};
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const std::size_t n = std::strtoul(argv[++i], nullptr, 10);
      if (n < 1 || n > criteria.size()) {
        std::cerr << "criterion must be 1.." << criteria.size() << '\n';
        return 2;
      }
      selected.push_back(n);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (selected.empty())
    for (std::size_t n = 1; n <= criteria.size(); ++n) selected.push_back(n);

  bool all = true;
  for (std::size_t n : selected) {
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
