#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "irdp/harness.hpp"
#include "irdp/eval.hpp"
#include "fixtures.hpp"

using namespace irdp;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// strip the *_time columns from a summary.csv for timing-free comparison
std::string strip_time_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  std::vector<std::size_t> keep;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].find("_time") == std::string::npos) keep.push_back(i);
      header = false;
    }
    for (std::size_t i : keep) out += cells[i] + ",";
    out += "\n";
  }
  return out;
}

ExperimentConfig tiny_experiment(const fs::path& problem_path) {
  ExperimentConfig cfg;
  InstanceSpec spec;
  spec.name = "chain";
  spec.path = problem_path.string();
  cfg.instances.push_back(spec);
  cfg.roster = {OptKind::RmPlus};
  cfg.num_inits = 12;
  cfg.master_seed = 7;
  return cfg;
}

AlgoSummary make_summary(OptKind kind, double value, bool converged, double secs) {
  AlgoSummary s;
  s.kind = kind;
  s.median_value = value;
  s.converged = converged;
  s.median_seconds = converged ? secs : -1.0;
  return s;
}

}  // namespace

TEST_CASE("lower median") {
  CHECK(lower_median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);  // even count: lower of the two middles
  CHECK(lower_median({5.0}) == 5.0);
  CHECK_THROWS_AS(lower_median({}), InvalidInput);
}

TEST_CASE("default grids match the experiment protocol") {
  CHECK(default_grid(OptKind::Pgd).size() == 4);
  CHECK(default_grid(OptKind::OptGd).size() == 4);
  CHECK(default_grid(OptKind::Ams).size() == 27);
  CHECK(default_grid(OptKind::Rm).size() == 1);
  CHECK(default_grid(OptKind::RmPlus).size() == 1);
  CHECK(*default_grid(OptKind::Pgd)[0].eta == 1.0);
}

TEST_CASE("sweep on the chain reaches the stationary value") {
  const fs::path dir = fs::temp_directory_path() / "irdp_test_sweep";
  fs::create_directories(dir);
  const fs::path problem_path = dir / "chain.json";
  save_problem_file(fixtures::absentminded_chain(), problem_path.string());

  const ExperimentConfig cfg = tiny_experiment(problem_path);
  const SweepResult result = sweep(cfg);
  REQUIRE(result.rows.size() == 1);
  const AlgoSummary& algo = result.rows[0].algos[0];
  CHECK(algo.kind == OptKind::RmPlus);
  CHECK(algo.converged);
  CHECK(algo.median_seconds >= 0.0);
  CHECK(algo.median_value == doctest::Approx(4000.0 / 2187.0).epsilon(1e-4));
  CHECK(algo.traces.size() == 12);
  fs::remove_all(dir);
}

TEST_CASE("grid selection picks the learning rate that converges fastest") {
  const fs::path dir = fs::temp_directory_path() / "irdp_test_grid";
  fs::create_directories(dir);
  const fs::path problem_path = dir / "chain.json";
  save_problem_file(fixtures::absentminded_chain(), problem_path.string());

  ExperimentConfig cfg = tiny_experiment(problem_path);
  cfg.roster = {OptKind::Pgd};
  cfg.num_inits = 3;
  // listed slow-first: selection must not fall back to grid order
  OptimizerConfig slow, fast;
  slow.kind = fast.kind = OptKind::Pgd;
  slow.eta = 0.001;
  fast.eta = 0.1;
  cfg.grids[OptKind::Pgd] = {slow, fast};
  const SweepResult result = sweep(cfg);
  const AlgoSummary& algo = result.rows[0].algos[0];
  CHECK(algo.converged);
  CHECK(*algo.selected.eta == doctest::Approx(0.1));
  CHECK(algo.median_value == doctest::Approx(4000.0 / 2187.0).epsilon(1e-4));

  // an omitted grid falls back to the defaults; on this objective the
  // largest step converges (to a vertex stationary point) in the fewest
  // iterations and is the one the protocol reports
  ExperimentConfig defaulted = tiny_experiment(problem_path);
  defaulted.roster = {OptKind::Pgd};
  defaulted.num_inits = 3;
  const SweepResult def_result = sweep(defaulted);
  CHECK(*def_result.rows[0].algos[0].selected.eta == doctest::Approx(1.0));
  fs::remove_all(dir);
}

TEST_CASE("sweep with a zero-iteration budget reports the initial utility") {
  const fs::path dir = fs::temp_directory_path() / "irdp_test_sweep0";
  fs::create_directories(dir);
  const fs::path problem_path = dir / "chain.json";
  const DecisionProblem chain = fixtures::absentminded_chain();
  save_problem_file(chain, problem_path.string());

  ExperimentConfig cfg = tiny_experiment(problem_path);
  cfg.roster = {OptKind::RmPlus, OptKind::Rm};
  cfg.num_inits = 1;
  cfg.termination.max_iterations = 0;
  const SweepResult result = sweep(cfg);
  const AlgoSummary& algo = result.rows[0].algos[0];
  // the lone init's final value is the initial strategy's utility
  REQUIRE(algo.traces.size() == 1);
  CHECK(algo.median_value == doctest::Approx(algo.traces[0].records.front().value));
  CHECK(!algo.converged);
  // initializations are shared across algorithms, so with no optimization
  // both report exactly the same value
  CHECK(result.rows[0].algos[1].median_value == algo.median_value);
  fs::remove_all(dir);
}

TEST_CASE("aggregation rank rules") {
  SUBCASE("strict ordering") {
    std::vector<SummaryRow> rows(1);
    rows[0].instance = "a";
    rows[0].algos = {make_summary(OptKind::RmPlus, 2.0, true, 1.0),
                     make_summary(OptKind::Pgd, 1.0, true, 2.0)};
    const auto aggs = aggregate(rows);
    CHECK(aggs[0].avg_value_rank == doctest::Approx(1.0));
    CHECK(aggs[1].avg_value_rank == doctest::Approx(2.0));
    CHECK(aggs[0].pct_value_best == doctest::Approx(100.0));
    CHECK(aggs[1].pct_value_best == doctest::Approx(0.0));
  }

  SUBCASE("values tied within 1e-4 share averaged ranks") {
    std::vector<SummaryRow> rows(1);
    rows[0].instance = "a";
    rows[0].algos = {make_summary(OptKind::RmPlus, 1.00004, true, 1.0),
                     make_summary(OptKind::Pgd, 1.0, true, 2.0)};
    const auto aggs = aggregate(rows);
    CHECK(aggs[0].avg_value_rank == doctest::Approx(1.5));
    CHECK(aggs[1].avg_value_rank == doctest::Approx(1.5));
    CHECK(aggs[0].pct_value_best == doctest::Approx(100.0));
    CHECK(aggs[1].pct_value_best == doctest::Approx(100.0));
  }

  SUBCASE("unconverged algorithms share the bottom convergence ranks") {
    std::vector<SummaryRow> rows(1);
    rows[0].instance = "a";
    rows[0].algos = {make_summary(OptKind::Rm, 1.0, true, 5.0),
                     make_summary(OptKind::Pgd, 1.0, false, 0.0),
                     make_summary(OptKind::Ams, 1.0, false, 0.0)};
    const auto aggs = aggregate(rows);
    CHECK(aggs[0].avg_convergence_rank == doctest::Approx(1.0));
    CHECK(aggs[1].avg_convergence_rank == doctest::Approx(2.5));
    CHECK(aggs[2].avg_convergence_rank == doctest::Approx(2.5));
    CHECK(aggs[0].pct_converged == doctest::Approx(100.0));
    CHECK(aggs[1].pct_converged == doctest::Approx(0.0));
  }

  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(aggregate({}), InvalidInput);
  }
}

TEST_CASE("aggregate sanity over a real two-algorithm sweep") {
  const fs::path dir = fs::temp_directory_path() / "irdp_test_agg";
  fs::create_directories(dir);
  const fs::path chain_path = dir / "chain.json";
  const fs::path step_path = dir / "step.json";
  save_problem_file(fixtures::absentminded_chain(), chain_path.string());
  save_problem_file(fixtures::forgetful_two_step(), step_path.string());

  ExperimentConfig cfg;
  for (const fs::path& p : {chain_path, step_path}) {
    InstanceSpec spec;
    spec.name = p.stem().string();
    spec.path = p.string();
    cfg.instances.push_back(spec);
  }
  cfg.roster = {OptKind::RmPlus, OptKind::Pgd};
  OptimizerConfig pgd;
  pgd.kind = OptKind::Pgd;
  pgd.eta = 0.1;
  cfg.grids[OptKind::Pgd] = {pgd};
  cfg.num_inits = 3;
  cfg.master_seed = 2;

  const SweepResult result = sweep(cfg);
  const auto aggs = aggregate(result.rows);
  for (const AlgoAggregate& agg : aggs) {
    CHECK(agg.pct_value_best >= 0.0);
    CHECK(agg.pct_value_best <= 100.0);
    CHECK(agg.avg_value_rank >= 1.0);
    CHECK(agg.avg_value_rank <= 2.0);
    CHECK(agg.avg_convergence_rank >= 1.0);
    CHECK(agg.avg_convergence_rank <= 2.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("report emits summary, traces and band files deterministically") {
  const fs::path dir = fs::temp_directory_path() / "irdp_test_report";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path problem_path = dir / "chain.json";
  save_problem_file(fixtures::absentminded_chain(), problem_path.string());

  ExperimentConfig cfg = tiny_experiment(problem_path);
  cfg.roster = {OptKind::RmPlus, OptKind::Rm};
  cfg.num_inits = 3;
  cfg.termination.max_iterations = 60;

  const SweepResult first = sweep(cfg);
  report(first, cfg.roster, (dir / "out_a").string());
  const SweepResult second = sweep(cfg);
  report(second, cfg.roster, (dir / "out_b").string());

  const std::string summary_a = slurp(dir / "out_a" / "summary.csv");
  const std::string summary_b = slurp(dir / "out_b" / "summary.csv");
  CHECK(strip_time_columns(summary_a) == strip_time_columns(summary_b));
  CHECK(slurp(dir / "out_a" / "plots" / "chain__RM_.csv") ==
        slurp(dir / "out_b" / "plots" / "chain__RM_.csv"));

  // converged rows blank the gap column
  CHECK(summary_a.find("---") != std::string::npos);
  // traces exist, one per init
  CHECK(fs::exists(dir / "out_a" / "traces" / "chain__RM__init2.jsonl"));

  // band columns hold min <= median <= max row-wise
  std::istringstream band(slurp(dir / "out_a" / "plots" / "chain__RM_.csv"));
  std::string line;
  std::getline(band, line);  // header
  int rows_checked = 0;
  while (std::getline(band, line)) {
    double iter, vmed, vmin, vmax, gmed, gmin, gmax;
    char comma;
    std::istringstream ls(line);
    ls >> iter >> comma >> vmed >> comma >> vmin >> comma >> vmax >> comma >> gmed >> comma >> gmin >>
        comma >> gmax;
    CHECK(vmin <= vmed + 1e-15);
    CHECK(vmed <= vmax + 1e-15);
    CHECK(gmin <= gmed + 1e-15);
    CHECK(gmed <= gmax + 1e-15);
    ++rows_checked;
  }
  CHECK(rows_checked > 0);
  fs::remove_all(dir);
}

TEST_CASE("experiment config parsing") {
  const std::string json = R"({
    "instances": [
      {"name": "r1", "family": "random", "seed": 3, "config": {"max_depth": 4}}
    ],
    "algorithms": ["rm+", "pgd"],
    "grids": {"pgd": [{"eta": 0.1}, {"eta": 0.01}]},
    "termination": {"gap_tolerance": 1e-5, "max_iterations": 100},
    "num_inits": 2,
    "seed": 5
  })";
  const ExperimentConfig cfg = parse_experiment(json, "");
  CHECK(cfg.instances.size() == 1);
  CHECK(cfg.instances[0].family == "random");
  CHECK(cfg.roster == std::vector<OptKind>{OptKind::RmPlus, OptKind::Pgd});
  CHECK(cfg.grids.at(OptKind::Pgd).size() == 2);
  CHECK(cfg.termination.gap_tolerance == doctest::Approx(1e-5));
  CHECK(cfg.num_inits == 2);
  CHECK(cfg.master_seed == 5);

  CHECK_THROWS_AS(parse_experiment("{}", ""), InvalidInput);
  CHECK_THROWS_AS(parse_experiment(R"({"instances":[],"algorithms":["rm"]})", ""), InvalidInput);
}
