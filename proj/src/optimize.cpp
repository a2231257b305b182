#include "irdp/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "irdp/rng.hpp"

namespace irdp {

bool is_predictive(OptKind kind) {
  return kind == OptKind::OptGd || kind == OptKind::PredRm || kind == OptKind::PredRmPlus;
}

bool is_rm_family(OptKind kind) {
  return kind == OptKind::Rm || kind == OptKind::RmPlus || kind == OptKind::PredRm ||
         kind == OptKind::PredRmPlus;
}

bool is_gd_family(OptKind kind) { return kind == OptKind::Pgd || kind == OptKind::OptGd; }

std::string to_string(OptKind kind) {
  switch (kind) {
    case OptKind::Pgd: return "PGD";
    case OptKind::OptGd: return "OPTGD";
    case OptKind::Ams: return "AMS";
    case OptKind::Rm: return "RM";
    case OptKind::RmPlus: return "RM+";
    case OptKind::PredRm: return "PRM";
    case OptKind::PredRmPlus: return "PRM+";
  }
  return "?";
}

OptKind parse_opt_kind(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "pgd") return OptKind::Pgd;
  if (s == "optgd" || s == "opgd") return OptKind::OptGd;
  if (s == "ams" || s == "amsgrad") return OptKind::Ams;
  if (s == "rm") return OptKind::Rm;
  if (s == "rm+" || s == "rmplus") return OptKind::RmPlus;
  if (s == "prm") return OptKind::PredRm;
  if (s == "prm+" || s == "prmplus") return OptKind::PredRmPlus;
  throw InvalidInput("unknown optimizer kind '" + name + "'");
}

void validate_config(const OptimizerConfig& config) {
  if (is_rm_family(config.kind)) {
    if (config.eta || config.beta1 || config.beta2)
      throw InvalidInput(to_string(config.kind) + " is parameter-free; step-size settings are invalid");
    return;
  }
  if (!config.eta || *config.eta <= 0.0) throw InvalidInput(to_string(config.kind) + " requires eta > 0");
  if (config.kind == OptKind::Ams) {
    const double b1 = config.beta1.value_or(-1.0);
    const double b2 = config.beta2.value_or(-1.0);
    if (b1 < 0.0 || b1 >= 1.0 || b2 < 0.0 || b2 >= 1.0)
      throw InvalidInput("AMS requires beta1, beta2 in [0,1)");
    if (config.div_epsilon < 0.0) throw InvalidInput("AMS requires div_epsilon >= 0");
  } else if (config.beta1 || config.beta2) {
    throw InvalidInput(to_string(config.kind) + " does not take beta parameters");
  }
}

std::string config_label(const OptimizerConfig& config) {
  std::string s = to_string(config.kind);
  if (config.eta) s += " eta=" + std::to_string(*config.eta);
  if (config.beta1) s += " b1=" + std::to_string(*config.beta1);
  if (config.beta2) s += " b2=" + std::to_string(*config.beta2);
  return s;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GapReached: return "GapReached";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::TimeLimit: return "TimeLimit";
  }
  return "?";
}

std::vector<double> project_simplex_euclidean(std::vector<double> v) {
  if (v.empty()) throw InvalidInput("cannot project an empty vector");
  // Threshold method: with the entries sorted descending, the active set is
  // the largest prefix whose entries stay above the running average shift.
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] > candidate) tau = candidate;
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
  return v;
}

std::vector<double> project_simplex_weighted(std::vector<double> v, std::span<const double> w) {
  if (v.empty()) throw InvalidInput("cannot project an empty vector");
  if (w.size() != v.size()) throw InvalidInput("weight dimension mismatch");
  for (double wi : w)
    if (!(wi > 0.0)) throw InvalidInput("weights must be strictly positive");

  // KKT: y_i = max(v_i - lambda / w_i, 0); the breakpoints are v_i * w_i.
  // Scanning them in descending order, lambda over the prefix active set is
  // (sum v - 1) / (sum 1/w); the optimal prefix is the largest one whose
  // last breakpoint still exceeds its lambda.
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] * w[a] > v[b] * w[b]; });

  double sum_v = 0.0;
  double sum_inv_w = 0.0;
  double lambda = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = order[j];
    sum_v += v[i];
    sum_inv_w += 1.0 / w[i];
    const double candidate = (sum_v - 1.0) / sum_inv_w;
    if (v[i] * w[i] > candidate) lambda = candidate;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(v[i] - lambda / w[i], 0.0);
  return y;
}

LocalOptimizer::LocalOptimizer(const OptimizerConfig& config, std::vector<double> x0)
    : config_(config), x_(std::move(x0)) {
  const std::size_t m = x_.size();
  if (is_gd_family(config_.kind)) anchor_ = x_;
  if (is_rm_family(config_.kind)) regrets_.assign(m, 0.0);
  if (config_.kind == OptKind::Ams) {
    m_.assign(m, 0.0);
    v_.assign(m, 0.0);
    vhat_.assign(m, 0.0);
  }
  scratch_.assign(m, 0.0);
}

const std::vector<double>& LocalOptimizer::get_x(std::span<const double> prediction) {
  switch (config_.kind) {
    case OptKind::Pgd:
    case OptKind::OptGd: {
      bool moved = false;
      for (double u : prediction)
        if (u != 0.0) moved = true;
      if (!moved) {
        x_ = anchor_;
        return x_;
      }
      const double eta = *config_.eta;
      for (std::size_t i = 0; i < x_.size(); ++i) scratch_[i] = anchor_[i] + eta * prediction[i];
      x_ = project_simplex_euclidean(scratch_);
      return x_;
    }
    case OptKind::Ams:
      return x_;  // not predictive; the iterate moves in step()
    case OptKind::Rm:
    case OptKind::RmPlus:
    case OptKind::PredRm:
    case OptKind::PredRmPlus: {
      double predicted_mix = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) predicted_mix += prediction[i] * x_[i];
      double total = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) {
        scratch_[i] = std::max(regrets_[i] + prediction[i] - predicted_mix, 0.0);
        total += scratch_[i];
      }
      if (total > 0.0)
        for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = scratch_[i] / total;
      // otherwise keep the previous iterate
      return x_;
    }
  }
  return x_;
}

void LocalOptimizer::step(std::span<const double> gradient) {
  switch (config_.kind) {
    case OptKind::Pgd:
    case OptKind::OptGd: {
      const double eta = *config_.eta;
      for (std::size_t i = 0; i < anchor_.size(); ++i) scratch_[i] = anchor_[i] + eta * gradient[i];
      anchor_ = project_simplex_euclidean(scratch_);
      break;
    }
    case OptKind::Ams: {
      const double b1 = config_.beta1.value_or(0.9);
      const double b2 = config_.beta2.value_or(0.999);
      const double eta = *config_.eta;
      for (std::size_t i = 0; i < x_.size(); ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * gradient[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * gradient[i] * gradient[i];
        vhat_[i] = std::max(vhat_[i], v_[i]);
      }
      std::vector<double> weights(x_.size());
      for (std::size_t i = 0; i < x_.size(); ++i) {
        const double root = std::sqrt(vhat_[i]);
        const double denom = (config_.ams_sqrt_divisor ? root : vhat_[i]) + config_.div_epsilon;
        scratch_[i] = x_[i] + eta * m_[i] / denom;
        weights[i] = std::max(root, config_.div_epsilon);  // keep the metric positive while vhat is 0
      }
      x_ = project_simplex_weighted(scratch_, weights);
      break;
    }
    case OptKind::Rm:
    case OptKind::PredRm: {
      double mix = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) mix += gradient[i] * x_[i];
      for (std::size_t i = 0; i < x_.size(); ++i) regrets_[i] += gradient[i] - mix;
      break;
    }
    case OptKind::RmPlus:
    case OptKind::PredRmPlus: {
      double mix = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) mix += gradient[i] * x_[i];
      for (std::size_t i = 0; i < x_.size(); ++i)
        regrets_[i] = std::max(regrets_[i] + gradient[i] - mix, 0.0);
      break;
    }
  }
}

RunTrace solve(const DecisionProblem& problem, const OptimizerConfig& config,
               const TerminationCriteria& termination, Strategy initial, int log_every,
               const IterationObserver& observer) {
  validate_config(config);
  require_strategy(problem, initial);
  if (log_every < 1) log_every = 1;

  const std::size_t n = problem.num_infosets();
  std::vector<LocalOptimizer> locals;
  locals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) locals.emplace_back(config, initial.probs[i]);

  const bool predictive = is_predictive(config.kind);
  std::vector<std::vector<double>> prev_grad(n);
  for (std::size_t i = 0; i < n; ++i) prev_grad[i].assign(initial.probs[i].size(), 0.0);

  Evaluator evaluator(problem);
  Strategy x = std::move(initial);
  RunTrace trace;
  const auto start = std::chrono::steady_clock::now();

  for (int t = 1;; ++t) {
    // Predictions use last iteration's gradient; prev_grad stays zero before
    // the first step and for non-predictive kinds.
    for (std::size_t i = 0; i < n; ++i) x.probs[i] = locals[i].get_x(prev_grad[i]);

    const EvalReport& report = evaluator.evaluate(x);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    StopReason reason{};
    bool stop = false;
    if (report.gap <= termination.gap_tolerance) {
      stop = true;
      reason = StopReason::GapReached;
    } else if (t >= termination.max_iterations) {
      stop = true;
      reason = StopReason::MaxIterations;
    } else if (secs >= termination.time_limit_secs) {
      stop = true;
      reason = StopReason::TimeLimit;
    }

    if (t == 1 || t % log_every == 0 || stop)
      trace.records.push_back({t, report.value, report.gap, secs});
    if (observer) observer(t, x, report);

    if (stop) {
      trace.reason = reason;
      trace.iterations = t;
      trace.final_value = report.value;
      trace.final_gap = report.gap;
      trace.total_seconds = secs;
      if (reason == StopReason::GapReached) {
        trace.convergence_iteration = t;
        trace.convergence_seconds = secs;
      }
      trace.final_strategy = x;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) locals[i].step(report.grad[i]);
    if (predictive) prev_grad = report.grad;
  }
  return trace;
}

RunTrace solve_seeded(const DecisionProblem& problem, const OptimizerConfig& config,
                      const TerminationCriteria& termination, std::uint64_t init_seed, int log_every) {
  return solve(problem, config, termination, uniform_random_strategy(problem, init_seed), log_every);
}

Strategy uniform_random_strategy(const DecisionProblem& problem, std::uint64_t seed) {
  Rng rng(seed);
  Strategy x;
  x.probs.resize(problem.num_infosets());
  for (std::size_t i = 0; i < problem.num_infosets(); ++i) {
    std::vector<double>& v = x.probs[i];
    v.resize(problem.infosets[i].actions.size());
    double total = 0.0;
    for (double& e : v) {
      e = rng.next_exponential();
      total += e;
    }
    if (total > 0.0)
      for (double& e : v) e /= total;
    else  // all draws exactly zero
      std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
  return x;
}

std::string trace_to_jsonl(const RunTrace& trace) {
  std::string out;
  for (const IterationRecord& rec : trace.records) {
    nlohmann::ordered_json j;
    j["t"] = rec.iteration;
    j["value"] = rec.value;
    j["gap"] = rec.gap;
    j["secs"] = rec.seconds;
    out += j.dump();
    out += '\n';
  }
  nlohmann::ordered_json fin;
  fin["final"] = true;
  fin["reason"] = to_string(trace.reason);
  fin["iterations"] = trace.iterations;
  fin["value"] = trace.final_value;
  fin["gap"] = trace.final_gap;
  fin["secs"] = trace.total_seconds;
  out += fin.dump();
  out += '\n';
  return out;
}

}  // namespace irdp
