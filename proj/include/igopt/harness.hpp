#ifndef IGOPT_HARNESS_HPP
#define IGOPT_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "igopt/algorithms.hpp"
#include "igopt/benchmarks.hpp"

namespace igopt {

enum class StopReason { TargetReached, OptimumSampled, Budget, EigenFloor, Degeneracy };

std::string to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string &s);

enum class AlgorithmKind { Pbil, Cma };

struct ExperimentConfig {
  std::string function;
  int d = 0;
  std::string variant;  // canonical token, see parse_variant
  int lambda = 0;
  int K = 0;
  double eta = 0.0;   // binary learning rate
  double T = 0.25;    // step-threshold parameter for the binary scheme
  double alpha = 0.0; // importance-mixing minimal refresh rate
  int trials = 50;
  std::uint64_t seed = 1;
  long long budget = -1;  // < 0: benchmark default
  double target = -1.0;   // < 0: benchmark default
};

// Maps a variant name (including aliases like "cga", "A".."D", "im") to its
// canonical token, or throws with the list of valid names.
std::string canonical_variant(const std::string &name);
AlgorithmKind algorithm_kind(const std::string &canonical);
CmaVariant cma_variant(const std::string &canonical);
std::vector<std::string> known_variant_names();

// 4 + floor(3 ln d), the CMA-ES default population size.
int default_lambda(int d);

void validate(const ExperimentConfig &config);

struct TrialResult {
  std::uint64_t seed = 0;
  bool success = false;
  long long evaluations = 0;
  double best_f = 0.0;
  long long iterations = 0;
  StopReason reason = StopReason::Budget;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  int success_count = 0;
  double success_probability = 0.0;
  double mean_evals_success = 0.0;  // NaN when no trial succeeded
  bool has_metric = false;
  double performance_metric = 0.0;  // mean_evals_success / success_probability
};

TrialResult run_trial(const ExperimentConfig &config, std::uint64_t seed);

// Trials use seeds base_seed + i and are independent; jobs > 1 runs them on
// worker threads with results identical to sequential execution.
ExperimentSummary run_experiment(const ExperimentConfig &config, int jobs = 1);

ExperimentSummary summarize(const ExperimentConfig &config, std::vector<TrialResult> trials);

void write_csv(const ExperimentSummary &summary, const std::string &path);
void write_json(const ExperimentSummary &summary, const std::string &path);
ExperimentSummary read_json(const std::string &path);

std::string csv_header();
std::string csv_row(const ExperimentConfig &config, const TrialResult &trial, int index);

}  // namespace igopt

#endif
