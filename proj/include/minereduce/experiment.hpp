#pragma once

// Multi-seed experiments, time-to-target runs, and their CSV/TSV output.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "minereduce/instance_io.hpp"
#include "minereduce/solver.hpp"
#include "minereduce/stats.hpp"

namespace minereduce {

struct RunRecord {
  std::uint64_t seed = 0;
  double cost = 0;
  double time = 0;  // solver wall-clock seconds

  bool operator==(const RunRecord&) const = default;
};

struct RunStats {
  std::string instance;
  Algorithm algorithm = Algorithm::MineReduce;
  double best_cost = 0;
  double avg_cost = 0;
  double avg_time = 0;
  std::vector<RunRecord> per_run;

  bool operator==(const RunStats&) const = default;
};

inline RunStats aggregate(std::string instance, Algorithm algorithm, std::vector<RunRecord> runs) {
  if (runs.empty()) throw UsageError("aggregate: no runs");
  RunStats s;
  s.instance = std::move(instance);
  s.algorithm = algorithm;
  s.best_cost = runs.front().cost;
  double cost = 0, time = 0;
  for (const auto& r : runs) {
    s.best_cost = std::min(s.best_cost, r.cost);
    cost += r.cost;
    time += r.time;
  }
  s.avg_cost = cost / static_cast<double>(runs.size());
  s.avg_time = time / static_cast<double>(runs.size());
  s.per_run = std::move(runs);
  return s;
}

using RunCallback = std::function<void(std::uint64_t seed, const RunResult&)>;

// Runs the solver with seeds params.seed, params.seed + 1, ...
inline RunStats run_experiment(const Instance& inst, const SolverParams& params, std::size_t num_runs,
                               const RunCallback& on_run = {}, const SolverObserver& observer = {}) {
  if (num_runs == 0) throw UsageError("run_experiment: need at least one run");
  std::vector<RunRecord> runs;
  for (std::size_t k = 0; k < num_runs; ++k) {
    SolverParams p = params;
    p.seed = params.seed + k;
    const auto t0 = std::chrono::steady_clock::now();
    RunResult result = run(inst, p, observer);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back({p.seed, result.best.cost, elapsed});
    if (on_run) on_run(p.seed, result);
  }
  return aggregate(inst.name, params.algorithm, std::move(runs));
}

struct TttResult {
  std::vector<double> times;          // ascending, one per run that hit the target
  std::vector<double> probabilities;  // (i - 0.5) / num_runs
  std::vector<std::uint64_t> solved_seeds;
  std::vector<std::uint64_t> censored_seeds;  // ran out of iterations
  std::size_t num_runs = 0;
};

inline TttResult ttt_run(const Instance& inst, const SolverParams& params, double target_cost, std::size_t num_runs) {
  if (!(target_cost > 0)) throw UsageError("ttt_run: target cost must be positive");
  TttResult out;
  out.num_runs = num_runs;
  std::vector<std::pair<double, std::uint64_t>> hits;
  for (std::size_t k = 0; k < num_runs; ++k) {
    SolverParams p = params;
    p.seed = params.seed + k;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<double> hit;
    SolverObserver obs;
    obs.on_iteration = [&](const IterationRecord&, const Solution& best) {
      if (best.cost <= target_cost) {
        hit = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return false;
      }
      return true;
    };
    run(inst, p, obs);
    if (hit)
      hits.emplace_back(*hit, p.seed);
    else
      out.censored_seeds.push_back(p.seed);
  }
  std::sort(hits.begin(), hits.end());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    out.times.push_back(hits[i].first);
    out.solved_seeds.push_back(hits[i].second);
    out.probabilities.push_back((static_cast<double>(i + 1) - 0.5) / static_cast<double>(num_runs));
  }
  return out;
}

// "i<TAB>time<TAB>probability<TAB>seed" rows for plotting.
inline void write_ttt(std::ostream& os, const TttResult& r) {
  os << "i\ttime\tprobability\tseed\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    os << i + 1 << '\t' << detail::format_double(r.times[i]) << '\t' << detail::format_double(r.probabilities[i])
       << '\t' << r.solved_seeds[i] << '\n';
  for (auto seed : r.censored_seeds) os << "# censored seed " << seed << '\n';
}

inline void write_iteration_log(std::ostream& os, std::span<const IterationRecord> log, std::uint64_t seed,
                                bool header) {
  if (header) os << "seed\titer\tgen_cost\tls_cost\tgen_time\tls_time\tmined\n";
  for (const auto& r : log)
    os << seed << '\t' << r.iter << '\t' << detail::format_double(r.gen_cost) << '\t'
       << detail::format_double(r.ls_cost) << '\t' << detail::format_double(r.gen_time) << '\t'
       << detail::format_double(r.ls_time) << '\t' << (r.mined_this_iter ? 1 : 0) << '\n';
}

// One row per (instance, algorithm). Summary columns at full precision,
// followed by the per-run seeds, costs and times as ';'-separated lists.
inline constexpr std::string_view kStatsHeader = "instance,algorithm,best_cost,avg_cost,avg_time,runs,seeds,costs,times";

inline void write_stats_csv(std::ostream& os, std::span<const RunStats> all, bool header = true) {
  using detail::format_double;
  if (header) os << kStatsHeader << '\n';
  for (const auto& s : all) {
    os << s.instance << ',' << to_string(s.algorithm) << ',' << format_double(s.best_cost) << ','
       << format_double(s.avg_cost) << ',' << format_double(s.avg_time) << ',' << s.per_run.size() << ',';
    for (std::size_t k = 0; k < s.per_run.size(); ++k) os << (k ? ";" : "") << s.per_run[k].seed;
    os << ',';
    for (std::size_t k = 0; k < s.per_run.size(); ++k) os << (k ? ";" : "") << format_double(s.per_run[k].cost);
    os << ',';
    for (std::size_t k = 0; k < s.per_run.size(); ++k) os << (k ? ";" : "") << format_double(s.per_run[k].time);
    os << '\n';
  }
}

inline std::vector<RunStats> parse_stats_csv(std::string_view text) {
  std::vector<RunStats> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
  };
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad number '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kStatsHeader) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 9) throw ParseError(line_no, "expected 9 columns, found " + std::to_string(cols.size()));
    RunStats s;
    s.instance = cols[0];
    const auto alg = parse_algorithm(cols[1]);
    if (!alg) throw ParseError(line_no, "unknown algorithm '" + cols[1] + "'");
    s.algorithm = *alg;
    s.best_cost = num(cols[2]);
    s.avg_cost = num(cols[3]);
    s.avg_time = num(cols[4]);
    const auto runs = static_cast<std::size_t>(num(cols[5]));
    const auto seeds = split(cols[6], ';'), costs = split(cols[7], ';'), times = split(cols[8], ';');
    if (seeds.size() != runs || costs.size() != runs || times.size() != runs)
      throw ParseError(line_no, "per-run lists do not match the run count");
    for (std::size_t k = 0; k < runs; ++k)
      s.per_run.push_back({static_cast<std::uint64_t>(std::stoull(seeds[k])), num(costs[k]), num(times[k])});
    out.push_back(std::move(s));
  }
  return out;
}

// Human-readable table, costs with two decimals.
inline void write_stats_table(std::ostream& os, std::span<const RunStats> all) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-11s %12s %12s %10s\n", "instance", "algorithm", "best", "avg", "time(s)");
  os << buf;
  for (const auto& s : all) {
    std::snprintf(buf, sizeof buf, "%-16s %-11s %12.2f %12.2f %10.2f\n", s.instance.c_str(),
                  std::string(to_string(s.algorithm)).c_str(), s.best_cost, s.avg_cost, s.avg_time);
    os << buf;
  }
}

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::MsIls;
  std::size_t best_wins = 0;  // instances where its best cost is the lowest (ties shared)
  std::size_t avg_wins = 0;
  std::size_t significant = 0;  // instances where it beats the baseline per t-test
  std::optional<double> apd_cost;  // vs. baseline, over instances both ran
  std::optional<double> apd_time;
};

// Wins, APD and per-instance paired t-tests against `baseline`.
inline std::vector<AlgorithmSummary> compare(std::span<const RunStats> all, Algorithm baseline, double alpha = 0.05) {
  std::map<std::string, std::map<Algorithm, const RunStats*>> by_instance;
  std::vector<Algorithm> algorithms;
  for (const auto& s : all) {
    by_instance[s.instance][s.algorithm] = &s;
    if (std::find(algorithms.begin(), algorithms.end(), s.algorithm) == algorithms.end())
      algorithms.push_back(s.algorithm);
  }
  std::sort(algorithms.begin(), algorithms.end());
  std::vector<AlgorithmSummary> out;
  for (Algorithm a : algorithms) {
    AlgorithmSummary sum;
    sum.algorithm = a;
    std::vector<double> base_cost, cand_cost, base_time, cand_time;
    for (const auto& [name, row] : by_instance) {
      auto it = row.find(a);
      if (it == row.end()) continue;
      double best = std::numeric_limits<double>::infinity(), avg = best;
      for (const auto& [alg, s] : row) {
        best = std::min(best, s->best_cost);
        avg = std::min(avg, s->avg_cost);
      }
      if (it->second->best_cost <= best + kCostTolerance) ++sum.best_wins;
      if (it->second->avg_cost <= avg + kCostTolerance) ++sum.avg_wins;
      auto base = row.find(baseline);
      if (base == row.end()) continue;
      base_cost.push_back(base->second->avg_cost);
      cand_cost.push_back(it->second->avg_cost);
      base_time.push_back(base->second->avg_time);
      cand_time.push_back(it->second->avg_time);
      if (a != baseline && base->second->per_run.size() == it->second->per_run.size() &&
          it->second->per_run.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& r : base->second->per_run) x.push_back(r.cost);
        for (const auto& r : it->second->per_run) y.push_back(r.cost);
        if (paired_t_test(x, y, alpha).significant) ++sum.significant;
      }
    }
    if (!base_cost.empty() && std::all_of(base_cost.begin(), base_cost.end(), [](double v) { return v > 0; }))
      sum.apd_cost = apd(base_cost, cand_cost);
    if (!base_time.empty() && std::all_of(base_time.begin(), base_time.end(), [](double v) { return v > 0; }))
      sum.apd_time = apd(base_time, cand_time);
    out.push_back(sum);
  }
  return out;
}

}  // namespace minereduce
