#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "irdp/bench.hpp"
#include "irdp/encode.hpp"
#include "irdp/errors.hpp"
#include "irdp/eval.hpp"
#include "irdp/harness.hpp"
#include "irdp/model.hpp"
#include "irdp/optimize.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"Solver suite for tree-form decision problems with imperfect recall"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a benchmark instance");
  std::string gen_family, gen_config_path, gen_out;
  std::uint64_t gen_seed = 0;
  generate->add_option("--family", gen_family, "simulation | detection | random")->required();
  generate->add_option("--config", gen_config_path, "generator config JSON file")->required();
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output problem path")->required();
  generate->callback([&] {
    const irdp::DecisionProblem problem =
        irdp::generate_instance(gen_family, read_file(gen_config_path), gen_seed);
    irdp::save_problem_file(problem, gen_out);
    const irdp::InstanceStats stats = irdp::instance_stats(problem);
    write_file(gen_out + ".stats.json", irdp::stats_to_json(stats) + "\n");
    std::cout << irdp::stats_to_json(stats) << "\n";
  });

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Run one optimizer on a problem");
  std::string solve_problem, solve_alg, solve_trace;
  std::uint64_t solve_seed = 0;
  double solve_eta = -1.0, solve_beta1 = -1.0, solve_beta2 = -1.0;
  double solve_gap_tol = 1e-6, solve_time_limit = 0.0;
  int solve_max_iters = 6000, solve_log_every = 1;
  solve_cmd->add_option("--problem", solve_problem)->required();
  solve_cmd->add_option("--alg", solve_alg, "pgd | optgd | ams | rm | rm+ | prm | prm+")->required();
  solve_cmd->add_option("--eta", solve_eta, "step size for pgd/optgd/ams (default 0.1)");
  solve_cmd->add_option("--beta1", solve_beta1, "ams first-moment decay (default 0.9)");
  solve_cmd->add_option("--beta2", solve_beta2, "ams second-moment decay (default 0.999)");
  solve_cmd->add_option("--seed", solve_seed, "strategy initialization seed");
  solve_cmd->add_option("--gap-tol", solve_gap_tol);
  solve_cmd->add_option("--max-iters", solve_max_iters);
  solve_cmd->add_option("--time-limit", solve_time_limit, "wall-clock seconds, 0 = none");
  solve_cmd->add_option("--trace", solve_trace, "write per-iteration JSONL here");
  solve_cmd->add_option("--log-every", solve_log_every);
  solve_cmd->callback([&] {
    const irdp::DecisionProblem problem = irdp::load_problem_file(solve_problem);
    irdp::OptimizerConfig config;
    config.kind = irdp::parse_opt_kind(solve_alg);
    if (solve_eta > 0) config.eta = solve_eta;
    if (solve_beta1 >= 0) config.beta1 = solve_beta1;
    if (solve_beta2 >= 0) config.beta2 = solve_beta2;
    if (irdp::is_gd_family(config.kind) && !config.eta) config.eta = 0.1;
    if (config.kind == irdp::OptKind::Ams) {
      if (!config.eta) config.eta = 0.1;
      if (!config.beta1) config.beta1 = 0.9;
      if (!config.beta2) config.beta2 = 0.999;
    }
    irdp::TerminationCriteria termination;
    termination.gap_tolerance = solve_gap_tol;
    termination.max_iterations = solve_max_iters;
    if (solve_time_limit > 0) termination.time_limit_secs = solve_time_limit;
    const irdp::RunTrace trace =
        irdp::solve_seeded(problem, config, termination, solve_seed, solve_log_every);
    if (!solve_trace.empty()) write_file(solve_trace, irdp::trace_to_jsonl(trace));
    nlohmann::ordered_json j;
    j["alg"] = irdp::to_string(config.kind);
    j["reason"] = irdp::to_string(trace.reason);
    j["iterations"] = trace.iterations;
    j["value"] = trace.final_value;
    j["gap"] = trace.final_gap;
    j["secs"] = trace.total_seconds;
    std::cout << j.dump() << "\n";
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string sweep_experiment, sweep_out_dir;
  bool sweep_serial = false;
  int sweep_workers = 0;
  sweep_cmd->add_option("--experiment", sweep_experiment, "experiment JSON file")->required();
  sweep_cmd->add_option("--out-dir", sweep_out_dir)->required();
  sweep_cmd->add_flag("--serial", sweep_serial, "single worker, for clean timings");
  sweep_cmd->add_option("--workers", sweep_workers);
  sweep_cmd->callback([&] {
    const std::string base_dir = std::filesystem::path(sweep_experiment).parent_path().string();
    irdp::ExperimentConfig config = irdp::parse_experiment(read_file(sweep_experiment), base_dir);
    if (sweep_serial) config.workers = 1;
    if (sweep_workers > 0) config.workers = sweep_workers;
    const irdp::SweepResult result = irdp::sweep(config);
    irdp::report(result, config.roster, sweep_out_dir);
    std::cout << "wrote " << sweep_out_dir << "/summary.csv\n";
  });

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Convert between polynomials and problems");
  std::string encode_poly, encode_problem, encode_out;
  encode_cmd->add_option("--poly", encode_poly, "polynomial JSON input");
  encode_cmd->add_option("--problem", encode_problem, "problem JSON input");
  encode_cmd->add_option("--out", encode_out)->required();
  encode_cmd->callback([&] {
    if (encode_poly.empty() == encode_problem.empty())
      throw irdp::InvalidInput("encode takes exactly one of --poly or --problem");
    if (!encode_poly.empty()) {
      const irdp::SparsePolynomial poly = irdp::parse_polynomial(read_file(encode_poly));
      irdp::save_problem_file(irdp::poly_to_problem(poly), encode_out);
    } else {
      const irdp::DecisionProblem problem = irdp::load_problem_file(encode_problem);
      write_file(encode_out, irdp::polynomial_to_json(irdp::problem_to_poly(problem)) + "\n");
    }
  });

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "Instance statistics and recall class");
  std::string inspect_problem;
  inspect_cmd->add_option("--problem", inspect_problem)->required();
  inspect_cmd->callback([&] {
    const irdp::DecisionProblem problem = irdp::load_problem_file(inspect_problem);
    std::cout << irdp::stats_to_json(irdp::instance_stats(problem)) << "\n";
  });

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Small-instance baselines");
  std::string oracle_problem, oracle_method;
  int oracle_resolution = 1000;
  oracle_cmd->add_option("--problem", oracle_problem)->required();
  oracle_cmd->add_option("--method", oracle_method, "pure | grid")->required();
  oracle_cmd->add_option("--resolution", oracle_resolution, "grid points per simplex dimension");
  oracle_cmd->callback([&] {
    const irdp::DecisionProblem problem = irdp::load_problem_file(oracle_problem);
    nlohmann::ordered_json j;
    if (oracle_method == "pure") {
      const irdp::PureOracleResult best = irdp::oracle_pure_enumeration(problem);
      j["method"] = "pure";
      j["value"] = best.value;
    } else if (oracle_method == "grid") {
      j["method"] = "grid";
      j["resolution"] = oracle_resolution;
      j["value"] = irdp::oracle_grid_search(problem, oracle_resolution);
    } else {
      throw irdp::InvalidInput("unknown oracle method '" + oracle_method + "'");
    }
    std::cout << j.dump() << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const irdp::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
