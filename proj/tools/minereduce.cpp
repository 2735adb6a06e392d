// Command-line harness: multi-seed experiments, time-to-target runs, result
// comparison, and instance conversion/generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minereduce/minereduce.hpp"

namespace mr = minereduce;

namespace {

struct SolveOptions {
  std::string instance;
  std::string algorithm = "minereduce";
  std::size_t runs = 20;
  std::uint64_t seed = 1;
  std::optional<std::size_t> max_iter, elite_size, max_patterns, delta;
  std::optional<int> beta;
  std::optional<double> min_sup, target;
  std::string log_iters, out, dump_patterns;
  bool full_ils_reduced = false;
};

mr::Instance load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return mr::read_instance(in);
  } catch (const mr::ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// Opens `path` for writing, or returns stdout when it is empty or "-".
std::ostream& open_out(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw std::runtime_error("cannot write " + path);
  return *holder;
}

int solve(const SolveOptions& o) {
  const auto algorithm = mr::parse_algorithm(o.algorithm);
  if (!algorithm) throw std::runtime_error("unknown algorithm '" + o.algorithm + "' (msils, mdm, minereduce)");
  mr::SolverParams p = mr::SolverParams::defaults(*algorithm);
  p.seed = o.seed;
  if (o.max_iter) p.max_iter = *o.max_iter;
  if (o.beta) p.beta = *o.beta;
  if (o.elite_size) p.elite_size = *o.elite_size;
  if (o.max_patterns) p.max_patterns = *o.max_patterns;
  if (o.min_sup) p.min_sup = *o.min_sup;
  if (o.delta) p.delta = *o.delta;
  p.full_ils_in_reduced = o.full_ils_reduced;

  const mr::Instance inst = load(o.instance);
  std::unique_ptr<std::ofstream> out_file;
  std::ostream& out = open_out(o.out, out_file);

  if (o.target) {
    const mr::TttResult r = mr::ttt_run(inst, p, *o.target, o.runs);
    mr::write_ttt(out, r);
    std::cerr << r.times.size() << "/" << o.runs << " runs reached " << *o.target << '\n';
    return 0;
  }

  std::ofstream log_file, pattern_file;
  if (!o.log_iters.empty()) {
    log_file.open(o.log_iters);
    if (!log_file) throw std::runtime_error("cannot write " + o.log_iters);
  }
  if (!o.dump_patterns.empty()) {
    pattern_file.open(o.dump_patterns);
    if (!pattern_file) throw std::runtime_error("cannot write " + o.dump_patterns);
  }

  std::uint64_t current_seed = p.seed;
  std::size_t current_iter = 0;
  mr::SolverObserver observer;
  observer.on_iteration = [&](const mr::IterationRecord& r, const mr::Solution&) {
    current_iter = r.iter;
    return true;
  };
  if (pattern_file.is_open())
    observer.on_mine = [&](const mr::EliteSet&, const mr::PatternList& list) {
      pattern_file << "# seed " << current_seed << " iter " << current_iter + 1 << '\n';
      mr::write_patterns(pattern_file, list);
    };
  bool first_log = true;
  auto on_run = [&](std::uint64_t seed, const mr::RunResult& r) {
    if (log_file.is_open()) {
      mr::write_iteration_log(log_file, r.log, seed, first_log);
      first_log = false;
    }
    std::cerr << "seed " << seed << ": " << mr::detail::format_double(r.best.cost) << '\n';
    current_seed = seed + 1;
    current_iter = 0;
  };

  const mr::RunStats stats = mr::run_experiment(inst, p, o.runs, on_run, observer);
  const std::vector<mr::RunStats> rows{stats};
  if (o.out.empty()) {
    mr::write_stats_table(std::cout, rows);
  } else {
    mr::write_stats_csv(out, rows);
  }
  return 0;
}

int compare(const std::vector<std::string>& files, const std::string& baseline_name, double alpha) {
  const auto baseline = mr::parse_algorithm(baseline_name);
  if (!baseline) throw std::runtime_error("unknown baseline algorithm '" + baseline_name + "'");
  std::vector<mr::RunStats> all;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw std::runtime_error("cannot open " + f);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto rows = mr::parse_stats_csv(buf.str());
      all.insert(all.end(), rows.begin(), rows.end());
    } catch (const mr::ParseError& e) {
      throw std::runtime_error(f + ": " + e.what());
    }
  }
  mr::write_stats_table(std::cout, all);
  std::cout << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-11s %9s %9s %12s %10s %10s\n", "algorithm", "best_wins", "avg_wins",
                "significant", "apd_cost", "apd_time");
  std::cout << line;
  for (const auto& s : mr::compare(all, *baseline, alpha)) {
    auto pct = [](const std::optional<double>& v) {
      char b[32];
      if (v)
        std::snprintf(b, sizeof b, "%.2f%%", *v);
      else
        std::snprintf(b, sizeof b, "-");
      return std::string(b);
    };
    std::snprintf(line, sizeof line, "%-11s %9zu %9zu %12zu %10s %10s\n", std::string(mr::to_string(s.algorithm)).c_str(),
                  s.best_wins, s.avg_wins, s.significant, pct(s.apd_cost).c_str(), pct(s.apd_time).c_str());
    std::cout << line;
  }
  return 0;
}

mr::VehicleType parse_vehicle(const std::string& spec) {
  // Q,f,r,m with m = -1 for unlimited.
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw std::runtime_error("bad vehicle spec '" + spec + "'");
    }
  }
  if (v.size() != 4 || v[3] < -1) throw std::runtime_error("vehicle spec must be Q,f,r,m (m = -1 for unlimited)");
  mr::VehicleType t{v[0], v[1], v[2], std::nullopt};
  if (v[3] >= 0) t.count = static_cast<std::size_t>(v[3]);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous-fleet VRP solver with elite-set mining and instance reduction"};
  app.require_subcommand(0, 1);

  SolveOptions o;
  app.add_option("--instance", o.instance, "Instance file");
  app.add_option("--algorithm", o.algorithm, "msils, mdm or minereduce")->capture_default_str();
  app.add_option("--runs", o.runs, "Number of seeded runs")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Base seed; run k uses seed + k")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Multi-start iterations per run (default 100)");
  app.add_option("--beta", o.beta, "ILS budget factor (default 5)");
  app.add_option("--elite-size", o.elite_size, "Elite set capacity (default 10)");
  app.add_option("--max-patterns", o.max_patterns, "Patterns kept per mining (default 6, mdm 9)");
  app.add_option("--min-sup", o.min_sup, "Relative minimum support (default 0.2, mdm 0.7)");
  app.add_option("--delta", o.delta, "Stability window in iterations (default 3)");
  app.add_option("--target", o.target, "Time-to-target mode: stop each run at this cost");
  app.add_option("--log-iters", o.log_iters, "Write per-iteration TSV log");
  app.add_option("--out", o.out, "Write CSV results (TSV in time-to-target mode)");
  app.add_option("--dump-patterns", o.dump_patterns, "Write mined patterns");
  app.add_flag("--full-ils-reduced", o.full_ils_reduced, "Run full ILS on reduced instances");

  auto* cmp = app.add_subcommand("compare", "Summarize result CSVs against a baseline");
  std::vector<std::string> csv_files;
  std::string baseline = "msils";
  double alpha = 0.05;
  cmp->add_option("files", csv_files, "Result CSV files")->required();
  cmp->add_option("--baseline", baseline, "Baseline algorithm")->capture_default_str();
  cmp->add_option("--alpha", alpha, "Significance level")->capture_default_str();

  auto* conv = app.add_subcommand("convert", "Convert a CVRPLIB-style file to the native format");
  std::string conv_in, conv_out;
  std::vector<std::string> vehicles;
  conv->add_option("input", conv_in, "CVRPLIB file")->required();
  conv->add_option("--vehicle", vehicles, "Vehicle type Q,f,r,m (repeat per type; m = -1 unlimited)")->required();
  conv->add_option("-o,--output", conv_out, "Output file (default stdout)");

  auto* gen = app.add_subcommand("generate", "Write a random instance");
  mr::GeneratorOptions gopt;
  std::uint64_t gseed = 1;
  std::string gen_out, gen_name = "random";
  gen->add_option("--customers", gopt.customers)->capture_default_str();
  gen->add_option("--types", gopt.vehicle_types)->capture_default_str();
  gen->add_option("--grid", gopt.grid)->capture_default_str();
  gen->add_flag("--limited", gopt.limited_fleet, "Finite vehicle counts");
  gen->add_option("--seed", gseed)->capture_default_str();
  gen->add_option("--name", gen_name)->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) return compare(csv_files, baseline, alpha);
    if (conv->parsed()) {
      std::vector<mr::VehicleType> fleet;
      for (const auto& v : vehicles) fleet.push_back(parse_vehicle(v));
      std::ifstream in(conv_in);
      if (!in) throw std::runtime_error("cannot open " + conv_in);
      std::ostringstream buf;
      buf << in.rdbuf();
      const mr::Instance inst = mr::convert_cvrplib(buf.str(), fleet);
      std::unique_ptr<std::ofstream> holder;
      mr::write_instance(open_out(conv_out, holder), inst);
      return 0;
    }
    if (gen->parsed()) {
      mr::Rng rng(gseed);
      const mr::Instance inst = mr::generate_instance(gopt, rng, gen_name);
      std::unique_ptr<std::ofstream> holder;
      mr::write_instance(open_out(gen_out, holder), inst);
      return 0;
    }
    if (o.instance.empty()) {
      std::cerr << "error: --instance is required\n" << app.help();
      return 2;
    }
    return solve(o);
  } catch (const mr::ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
