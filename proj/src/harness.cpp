#include "irdp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "irdp/eval.hpp"
#include "irdp/rng.hpp"

namespace irdp {

namespace {

constexpr double kValueTieTolerance = 1e-4;

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

std::string fmt_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_gap(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_secs(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

double lower_median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of empty list");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

std::vector<OptimizerConfig> default_grid(OptKind kind) {
  std::vector<OptimizerConfig> grid;
  switch (kind) {
    case OptKind::Pgd:
    case OptKind::OptGd:
      for (double eta : {1.0, 0.1, 0.01, 0.001}) {
        OptimizerConfig c;
        c.kind = kind;
        c.eta = eta;
        grid.push_back(c);
      }
      break;
    case OptKind::Ams:
      for (double eta : {1.0, 0.1, 0.01})
        for (double b1 : {0.8, 0.9, 0.99})
          for (double b2 : {0.99, 0.999, 0.9999}) {
            OptimizerConfig c;
            c.kind = kind;
            c.eta = eta;
            c.beta1 = b1;
            c.beta2 = b2;
            grid.push_back(c);
          }
      break;
    default: {
      OptimizerConfig c;
      c.kind = kind;
      grid.push_back(c);
    }
  }
  return grid;
}

namespace {

ExperimentConfig parse_experiment_checked(const std::string& json, const std::string& base_dir) {
  nlohmann::json doc = nlohmann::json::parse(json);

  ExperimentConfig cfg;
  for (const auto& ji : doc.at("instances")) {
    InstanceSpec spec;
    spec.name = ji.at("name").get<std::string>();
    if (ji.contains("path")) {
      std::filesystem::path p = ji["path"].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      spec.path = p.string();
    } else {
      spec.family = ji.at("family").get<std::string>();
      spec.config_json = ji.at("config").dump();
      spec.seed = ji.value("seed", 0ULL);
    }
    cfg.instances.push_back(std::move(spec));
  }

  for (const auto& ja : doc.at("algorithms")) cfg.roster.push_back(parse_opt_kind(ja.get<std::string>()));

  if (doc.contains("grids")) {
    for (const auto& [name, points] : doc["grids"].items()) {
      const OptKind kind = parse_opt_kind(name);
      std::vector<OptimizerConfig> grid;
      for (const auto& jp : points) {
        OptimizerConfig c;
        c.kind = kind;
        if (jp.contains("eta")) c.eta = jp["eta"].get<double>();
        if (jp.contains("beta1")) c.beta1 = jp["beta1"].get<double>();
        if (jp.contains("beta2")) c.beta2 = jp["beta2"].get<double>();
        if (jp.contains("div_epsilon")) c.div_epsilon = jp["div_epsilon"].get<double>();
        if (jp.contains("ams_sqrt_divisor")) c.ams_sqrt_divisor = jp["ams_sqrt_divisor"].get<bool>();
        validate_config(c);
        grid.push_back(c);
      }
      if (grid.empty()) throw InvalidInput("empty grid for " + to_string(kind));
      cfg.grids[kind] = std::move(grid);
    }
  }

  if (doc.contains("termination")) {
    const auto& jt = doc["termination"];
    cfg.termination.gap_tolerance = jt.value("gap_tolerance", cfg.termination.gap_tolerance);
    cfg.termination.max_iterations = jt.value("max_iterations", cfg.termination.max_iterations);
    if (jt.contains("time_limit_secs")) cfg.termination.time_limit_secs = jt["time_limit_secs"].get<double>();
  }
  cfg.num_inits = doc.value("num_inits", cfg.num_inits);
  cfg.master_seed = doc.value("seed", cfg.master_seed);
  cfg.log_every = doc.value("log_every", cfg.log_every);
  cfg.workers = doc.value("workers", cfg.workers);
  if (cfg.num_inits < 1) throw InvalidInput("num_inits must be >= 1");
  if (cfg.instances.empty()) throw InvalidInput("experiment lists no instances");
  if (cfg.roster.empty()) throw InvalidInput("experiment lists no algorithms");
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& json, const std::string& base_dir) {
  try {
    return parse_experiment_checked(json, base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed experiment config: ") + e.what());
  }
}

namespace {

struct RunSlot {
  RunTrace trace;
  bool failed = false;
  std::string error;
};

// Initializations are shared across algorithms and hyperparameter points of
// an instance, so value comparisons see identical starting points.
std::uint64_t init_seed(std::uint64_t master, std::size_t instance_idx, int init_idx) {
  Rng base(master);
  return base.split(instance_idx * 1000003ULL + static_cast<std::uint64_t>(init_idx)).next_u64();
}

void run_parallel(std::size_t task_count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(task_count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < task_count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= task_count) return;
        body(i);
      }
    });
  for (std::thread& t : pool) t.join();
}

}  // namespace

SweepResult sweep(const ExperimentConfig& config) {
  SweepResult result;

  std::map<OptKind, std::vector<OptimizerConfig>> grids = config.grids;
  for (OptKind kind : config.roster)
    if (!grids.count(kind)) grids[kind] = default_grid(kind);

  for (std::size_t inst_idx = 0; inst_idx < config.instances.size(); ++inst_idx) {
    const InstanceSpec& spec = config.instances[inst_idx];
    const DecisionProblem problem =
        spec.path.empty() ? generate_instance(spec.family, spec.config_json, spec.seed)
                          : load_problem_file(spec.path);
    {
      const std::vector<std::string> violations = validate(problem);
      if (!violations.empty())
        throw InvalidInput("instance " + spec.name + " fails validation: " + violations.front());
    }

    std::vector<Strategy> inits;
    inits.reserve(static_cast<std::size_t>(config.num_inits));
    for (int i = 0; i < config.num_inits; ++i)
      inits.push_back(uniform_random_strategy(problem, init_seed(config.master_seed, inst_idx, i)));

    struct Task {
      std::size_t algo_idx, cfg_idx;
      int init_idx;
    };
    std::vector<Task> tasks;
    for (std::size_t a = 0; a < config.roster.size(); ++a)
      for (std::size_t c = 0; c < grids[config.roster[a]].size(); ++c)
        for (int i = 0; i < config.num_inits; ++i) tasks.push_back({a, c, i});

    std::vector<RunSlot> slots(tasks.size());
    run_parallel(tasks.size(), config.workers, [&](std::size_t t) {
      const Task& task = tasks[t];
      const OptimizerConfig& cfg = grids.at(config.roster[task.algo_idx])[task.cfg_idx];
      try {
        slots[t].trace = solve(problem, cfg, config.termination,
                               inits[static_cast<std::size_t>(task.init_idx)], config.log_every);
      } catch (const std::exception& e) {
        // per-run failures are recorded, not fatal; they count as unconverged
        slots[t].failed = true;
        slots[t].error = e.what();
        slots[t].trace.final_value = -std::numeric_limits<double>::infinity();
        slots[t].trace.final_gap = std::numeric_limits<double>::infinity();
      }
    });
    for (std::size_t t = 0; t < slots.size(); ++t)
      if (slots[t].failed)
        std::fprintf(stderr, "run failed on %s (%s): %s\n", spec.name.c_str(),
                     config_label(grids.at(config.roster[tasks[t].algo_idx])[tasks[t].cfg_idx]).c_str(),
                     slots[t].error.c_str());

    SummaryRow row;
    row.instance = spec.name;
    for (std::size_t a = 0; a < config.roster.size(); ++a) {
      const OptKind kind = config.roster[a];
      const std::vector<OptimizerConfig>& grid = grids[kind];

      // Selection: earliest median iteration count to tolerance; wall time is
      // reported but deliberately not used so reruns select identically.
      std::size_t best_cfg = 0;
      double best_iters = std::numeric_limits<double>::infinity();
      double best_gap = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < grid.size(); ++c) {
        std::vector<double> iters, gaps;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
          if (tasks[t].algo_idx != a || tasks[t].cfg_idx != c) continue;
          const RunTrace& trace = slots[t].trace;
          iters.push_back(trace.convergence_iteration < 0
                              ? std::numeric_limits<double>::infinity()
                              : static_cast<double>(trace.convergence_iteration));
          gaps.push_back(trace.final_gap);
        }
        const double med_iters = lower_median(iters);
        const double med_gap = lower_median(gaps);
        const bool better = med_iters < best_iters ||
                            (std::isinf(med_iters) && std::isinf(best_iters) && med_gap < best_gap);
        if (c == 0 || better) {
          best_cfg = c;
          best_iters = med_iters;
          best_gap = med_gap;
        }
      }

      AlgoSummary summary;
      summary.kind = kind;
      summary.selected = grid[best_cfg];
      std::vector<double> values, secs, gaps;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (tasks[t].algo_idx != a || tasks[t].cfg_idx != best_cfg) continue;
        RunTrace& trace = slots[t].trace;
        values.push_back(trace.final_value);
        gaps.push_back(trace.final_gap);
        secs.push_back(trace.convergence_seconds < 0 ? std::numeric_limits<double>::infinity()
                                                     : trace.convergence_seconds);
        summary.traces.push_back(std::move(trace));
      }
      summary.median_value = lower_median(values);
      summary.median_final_gap = lower_median(gaps);
      const double med_secs = lower_median(secs);
      summary.converged = std::isfinite(med_secs);
      summary.median_seconds = summary.converged ? med_secs : -1.0;
      row.algos.push_back(std::move(summary));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

// Leader-based tie clustering on a descending-sorted index list.
std::vector<double> averaged_ranks(const std::vector<double>& score, bool higher_better, double tie_tol) {
  const std::size_t n = score.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_better ? score[a] > score[b] : score[a] < score[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && std::fabs(score[order[end]] - score[order[start]]) <= tie_tol) ++end;
    const double shared = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = shared;
    start = end;
  }
  return ranks;
}

}  // namespace

std::vector<AlgoAggregate> aggregate(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw InvalidInput("aggregate requires at least one instance");
  const std::size_t n_algos = rows.front().algos.size();
  if (n_algos < 2) throw InvalidInput("aggregate requires at least two algorithms");

  std::vector<AlgoAggregate> out(n_algos);
  for (std::size_t a = 0; a < n_algos; ++a) out[a].kind = rows.front().algos[a].kind;

  for (const SummaryRow& row : rows) {
    std::vector<double> values(n_algos);
    for (std::size_t a = 0; a < n_algos; ++a) values[a] = row.algos[a].median_value;
    const std::vector<double> value_ranks = averaged_ranks(values, true, kValueTieTolerance);
    const double best_value = *std::max_element(values.begin(), values.end());
    for (std::size_t a = 0; a < n_algos; ++a) {
      out[a].avg_value_rank += value_ranks[a];
      if (values[a] >= best_value - kValueTieTolerance) out[a].pct_value_best += 1.0;
    }

    // Convergence: converged algorithms ranked by wall time; the rest share
    // the averaged bottom positions.
    std::vector<std::size_t> converged, unconverged;
    for (std::size_t a = 0; a < n_algos; ++a)
      (row.algos[a].converged ? converged : unconverged).push_back(a);
    std::sort(converged.begin(), converged.end(), [&](std::size_t x, std::size_t y) {
      return row.algos[x].median_seconds < row.algos[y].median_seconds;
    });
    for (std::size_t k = 0; k < converged.size(); ++k)
      out[converged[k]].avg_convergence_rank += static_cast<double>(k + 1);
    const double shared =
        (static_cast<double>(converged.size() + 1) + static_cast<double>(n_algos)) / 2.0;
    for (std::size_t a : unconverged) out[a].avg_convergence_rank += shared;
    for (std::size_t a : converged) out[a].pct_converged += 1.0;
    if (!converged.empty()) {
      const double fastest = row.algos[converged.front()].median_seconds;
      for (std::size_t a : converged)
        if (row.algos[a].median_seconds <= fastest) out[a].pct_convergence_best += 1.0;
    }
  }

  const double scale = 100.0 / static_cast<double>(rows.size());
  for (AlgoAggregate& agg : out) {
    agg.pct_value_best *= scale;
    agg.pct_converged *= scale;
    agg.pct_convergence_best *= scale;
    agg.avg_value_rank /= static_cast<double>(rows.size());
    agg.avg_convergence_rank /= static_cast<double>(rows.size());
  }
  return out;
}

void report(const SweepResult& result, const std::vector<OptKind>& roster, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "traces", ec);
  fs::create_directories(fs::path(out_dir) / "plots", ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  // summary.csv, one row per instance, value/time/gap columns per algorithm.
  {
    std::ofstream csv(fs::path(out_dir) / "summary.csv");
    csv << "instance";
    for (OptKind kind : roster)
      csv << ',' << to_string(kind) << "_value," << to_string(kind) << "_time," << to_string(kind)
          << "_gap";
    csv << '\n';
    for (const SummaryRow& row : result.rows) {
      csv << sanitize(row.instance);
      for (const AlgoSummary& algo : row.algos) {
        csv << ',' << fmt_value(algo.median_value) << ',';
        if (algo.converged)
          csv << fmt_secs(algo.median_seconds) << ",---";
        else
          csv << "---," << fmt_gap(algo.median_final_gap);
      }
      csv << '\n';
    }
  }

  if (result.rows.size() >= 1 && roster.size() >= 2) {
    const std::vector<AlgoAggregate> aggs = aggregate(result.rows);
    std::ofstream csv(fs::path(out_dir) / "aggregate.csv");
    csv << "metric";
    for (const AlgoAggregate& agg : aggs) csv << ',' << to_string(agg.kind);
    csv << '\n';
    auto emit = [&](const char* name, auto get) {
      csv << name;
      for (const AlgoAggregate& agg : aggs) csv << ',' << fmt_gap(get(agg));
      csv << '\n';
    };
    emit("value_pct_best", [](const AlgoAggregate& a) { return a.pct_value_best; });
    emit("value_avg_rank", [](const AlgoAggregate& a) { return a.avg_value_rank; });
    emit("convergence_pct_reached", [](const AlgoAggregate& a) { return a.pct_converged; });
    emit("convergence_pct_best", [](const AlgoAggregate& a) { return a.pct_convergence_best; });
    emit("convergence_avg_rank", [](const AlgoAggregate& a) { return a.avg_convergence_rank; });
  }

  for (const SummaryRow& row : result.rows) {
    for (const AlgoSummary& algo : row.algos) {
      const std::string stem = sanitize(row.instance) + "__" + sanitize(to_string(algo.kind));
      for (std::size_t i = 0; i < algo.traces.size(); ++i) {
        std::ofstream jsonl(fs::path(out_dir) / "traces" / (stem + "__init" + std::to_string(i) + ".jsonl"));
        jsonl << trace_to_jsonl(algo.traces[i]);
      }

      // Band data: min/median/max over the inits that logged each iteration.
      std::map<int, std::vector<std::pair<double, double>>> by_iter;
      for (const RunTrace& trace : algo.traces)
        for (const IterationRecord& rec : trace.records)
          by_iter[rec.iteration].push_back({rec.value, rec.gap});
      std::ofstream csv(fs::path(out_dir) / "plots" / (stem + ".csv"));
      csv << "iteration,value_median,value_min,value_max,gap_median,gap_min,gap_max\n";
      for (auto& [iteration, entries] : by_iter) {
        std::vector<double> values, gaps;
        for (auto [v, g] : entries) {
          values.push_back(v);
          gaps.push_back(g);
        }
        const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
        const auto [gmin, gmax] = std::minmax_element(gaps.begin(), gaps.end());
        csv << iteration << ',' << fmt_value(lower_median(values)) << ',' << fmt_value(*vmin) << ','
            << fmt_value(*vmax) << ',' << fmt_gap(lower_median(gaps)) << ',' << fmt_gap(*gmin) << ','
            << fmt_gap(*gmax) << '\n';
      }
    }
  }
}

}  // namespace irdp
