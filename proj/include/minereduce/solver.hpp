#pragma once

// Multi-start ILS and its two data-mining hybrids.
//
//   MS_ILS      construct, ILS; repeat.
//   MDM_MS_ILS  once the elite set is stable, mine patterns and seed each
//               construction with the next pattern's segments.
//   MINEREDUCE  once the elite set is stable, mine patterns and build each
//               starting solution by reducing the instance with the next
//               pattern, solving the reduced instance and expanding.
//
// The iteration loop is generic over its phases so that the mining schedule
// can be exercised with scripted solutions.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "minereduce/construct.hpp"
#include "minereduce/local_search.hpp"
#include "minereduce/mining.hpp"
#include "minereduce/model.hpp"
#include "minereduce/reduce.hpp"
#include "minereduce/rng.hpp"

namespace minereduce {

enum class Algorithm { MsIls, MdmMsIls, MineReduce };

inline constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::MsIls: return "msils";
    case Algorithm::MdmMsIls: return "mdm";
    case Algorithm::MineReduce: return "minereduce";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "msils") return Algorithm::MsIls;
  if (s == "mdm") return Algorithm::MdmMsIls;
  if (s == "minereduce") return Algorithm::MineReduce;
  return std::nullopt;
}

struct SolverParams {
  std::size_t max_iter = 100;
  int beta = 5;
  std::size_t elite_size = 10;
  std::size_t max_patterns = 6;
  double min_sup = 0.2;
  std::size_t delta = 3;
  Algorithm algorithm = Algorithm::MineReduce;
  std::uint64_t seed = 1;
  bool full_ils_in_reduced = false;

  // Tuned values per algorithm; MS_ILS only uses max_iter and beta.
  static SolverParams defaults(Algorithm algorithm) {
    SolverParams p;
    p.algorithm = algorithm;
    if (algorithm == Algorithm::MdmMsIls) {
      p.max_patterns = 9;
      p.min_sup = 0.7;
    }
    return p;
  }
};

struct IterationRecord {
  std::size_t iter = 0;
  double gen_cost = 0;
  double ls_cost = 0;
  double gen_time = 0;  // seconds
  double ls_time = 0;
  bool mined_this_iter = false;
  std::optional<std::size_t> pattern_id;
};

struct RunResult {
  Solution best;
  std::vector<IterationRecord> log;
};

struct SolverObserver {
  // Called after every iteration with the best solution so far. Returning
  // false stops the run.
  std::function<bool(const IterationRecord&, const Solution&)> on_iteration;
  std::function<void(const EliteSet&, const PatternList&)> on_mine;
};

// Running minimum of the local-search costs.
inline std::vector<double> best_cost_trace(std::span<const IterationRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(out.empty() ? r.ls_cost : std::min(out.back(), r.ls_cost));
  return out;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace detail

// Phases must provide
//   Solution generate(Rng&)
//   std::optional<Solution> generate_from(const Pattern&, Rng&)   // nullopt: fall back
//   Solution improve(const Solution&, Rng&)
//   PatternList mine(const EliteSet&)
template <typename Phases>
RunResult multi_start(const SolverParams& params, Phases& phases, const SolverObserver& observer = {}) {
  Rng rng(params.seed);
  const bool mining = params.algorithm != Algorithm::MsIls;
  EliteSet elite(params.elite_size);
  PatternList patterns;
  RunResult result;
  bool have_best = false;

  for (std::size_t iter = 1; iter <= params.max_iter; ++iter) {
    IterationRecord rec;
    rec.iter = iter;
    if (mining && is_stable(elite, params.delta, iter)) {
      patterns = phases.mine(elite);
      elite.mark_mined();
      rec.mined_this_iter = true;
      if (observer.on_mine) observer.on_mine(elite, patterns);
    }

    auto t0 = detail::Clock::now();
    std::optional<Solution> start;
    for (std::size_t tries = 0; tries < patterns.size() && !start; ++tries) {
      const std::size_t id = patterns.cursor();
      const Pattern& p = patterns.next();
      if (p.segments.empty()) continue;
      start = phases.generate_from(p, rng);
      if (start) rec.pattern_id = id;
    }
    if (!start) start = phases.generate(rng);
    rec.gen_time = detail::seconds_since(t0);
    rec.gen_cost = start->cost;

    t0 = detail::Clock::now();
    Solution improved = phases.improve(*start, rng);
    rec.ls_time = detail::seconds_since(t0);
    rec.ls_cost = improved.cost;

    if (mining) elite.update(improved, iter);
    if (!have_best || improved.cost < result.best.cost) {
      result.best = std::move(improved);
      have_best = true;
    }
    result.log.push_back(rec);
    if (observer.on_iteration && !observer.on_iteration(rec, result.best)) break;
  }
  return result;
}

namespace detail {

class HfvrpPhases {
 public:
  HfvrpPhases(const Instance& inst, const SolverParams& params) : inst_(inst), params_(params) {
    ils_.beta = params.beta;
  }

  Solution generate(Rng& rng) { return generate_initial_solution(inst_, rng); }

  std::optional<Solution> generate_from(const Pattern& p, Rng& rng) {
    try {
      if (params_.algorithm == Algorithm::MdmMsIls) return seed_solution_from_pattern(inst_, p.segments, rng);
      return minereduce_generation(inst_, p.segments, ils_, rng, {params_.full_ils_in_reduced});
    } catch (const ConstructionError&) {
      return std::nullopt;
    }
  }

  Solution improve(const Solution& s, Rng& rng) { return ils(inst_, s, ils_, rng); }

  PatternList mine(const EliteSet& elite) { return mine_patterns(elite, params_.max_patterns, params_.min_sup); }

 private:
  const Instance& inst_;
  const SolverParams& params_;
  IlsParams ils_;
};

}  // namespace detail

inline RunResult run(const Instance& inst, const SolverParams& params, const SolverObserver& observer = {}) {
  validate(inst);
  if (!inst.capacity_sufficient()) {
    std::vector<VertexId> all;
    for (VertexId c = 1; c < static_cast<VertexId>(inst.vertex_count()); ++c) all.push_back(c);
    throw ConstructionError("instance " + inst.name + " cannot be served by its fleet", std::move(all));
  }
  detail::HfvrpPhases phases(inst, params);
  return multi_start(params, phases, observer);
}

}  // namespace minereduce
