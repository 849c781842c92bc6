#include "igopt.h"

#include <cstdio>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>

#include "igopt/harness.hpp"
#include "igopt/selftest.hpp"

struct igopt_experiment_s {
  igopt::ExperimentConfig config;
  bool lambda_default = false;
  std::optional<igopt::ExperimentSummary> summary;
  std::string error;
};

namespace {

int fail(igopt_experiment *exp, int code, const std::string &msg) {
  exp->error = msg;
  return code;
}

template <class Fn>
int guarded(igopt_experiment *exp, int error_code, Fn &&fn) {
  try {
    fn();
    exp->error.clear();
    return IGOPT_OK;
  } catch (const std::exception &e) {
    return fail(exp, error_code, e.what());
  }
}

}  // namespace

extern "C" {

igopt_experiment *igopt_experiment_new(void) { return new igopt_experiment_s(); }

void igopt_experiment_free(igopt_experiment *exp) { delete exp; }

int igopt_experiment_set(igopt_experiment *exp, const char *key, const char *value) {
  if (!exp) return IGOPT_ERR_CONFIG;
  if (!key || !value) return fail(exp, IGOPT_ERR_CONFIG, "null key or value");
  return guarded(exp, IGOPT_ERR_CONFIG, [&] {
    const std::string k = key, v = value;
    auto &c = exp->config;
    if (k == "function") c.function = v;
    else if (k == "d") c.d = std::stoi(v);
    else if (k == "variant") c.variant = igopt::canonical_variant(v);
    else if (k == "lambda") {
      if (v == "default") exp->lambda_default = true;
      else {
        c.lambda = std::stoi(v);
        exp->lambda_default = false;
      }
    } else if (k == "K") c.K = std::stoi(v);
    else if (k == "eta") c.eta = std::stod(v);
    else if (k == "T") c.T = std::stod(v);
    else if (k == "alpha") c.alpha = std::stod(v);
    else if (k == "trials") c.trials = std::stoi(v);
    else if (k == "seed") c.seed = std::stoull(v);
    else if (k == "budget") c.budget = std::stoll(v);
    else if (k == "target") c.target = std::stod(v);
    else throw std::invalid_argument("unknown configuration key: " + k);
  });
}

const char *igopt_error_message(const igopt_experiment *exp) {
  return exp ? exp->error.c_str() : "null experiment handle";
}

int igopt_experiment_run(igopt_experiment *exp, int jobs) {
  if (!exp) return IGOPT_ERR_CONFIG;
  return guarded(exp, IGOPT_ERR_CONFIG, [&] {
    if (exp->lambda_default) exp->config.lambda = igopt::default_lambda(exp->config.d);
    igopt::validate(exp->config);
    exp->summary = igopt::run_experiment(exp->config, jobs);
  });
}

int igopt_trial_count(const igopt_experiment *exp) {
  return exp && exp->summary ? static_cast<int>(exp->summary->trials.size()) : 0;
}

int igopt_success_count(const igopt_experiment *exp) {
  return exp && exp->summary ? exp->summary->success_count : 0;
}

double igopt_success_probability(const igopt_experiment *exp) {
  return exp && exp->summary ? exp->summary->success_probability : 0.0;
}

double igopt_mean_evaluations(const igopt_experiment *exp) {
  return exp && exp->summary ? exp->summary->mean_evals_success : 0.0;
}

int igopt_performance_metric(const igopt_experiment *exp, double *out) {
  if (!exp || !exp->summary || !out) return IGOPT_ERR_CONFIG;
  if (!exp->summary->has_metric) return IGOPT_ERR_CONFIG;
  *out = exp->summary->performance_metric;
  return IGOPT_OK;
}

int igopt_csv_header(char *buf, size_t len) {
  return std::snprintf(buf, len, "%s", igopt::csv_header().c_str());
}

int igopt_csv_row(const igopt_experiment *exp, int trial, char *buf, size_t len) {
  if (!exp || !exp->summary || trial < 0 ||
      trial >= static_cast<int>(exp->summary->trials.size()))
    return -1;
  const std::string row = igopt::csv_row(
      exp->summary->config, exp->summary->trials[static_cast<std::size_t>(trial)], trial);
  return std::snprintf(buf, len, "%s", row.c_str());
}

int igopt_write_csv(igopt_experiment *exp, const char *path) {
  if (!exp) return IGOPT_ERR_IO;
  if (!exp->summary) return fail(exp, IGOPT_ERR_CONFIG, "no results: run the experiment first");
  return guarded(exp, IGOPT_ERR_IO, [&] { igopt::write_csv(*exp->summary, path); });
}

int igopt_write_json(igopt_experiment *exp, const char *path) {
  if (!exp) return IGOPT_ERR_IO;
  if (!exp->summary) return fail(exp, IGOPT_ERR_CONFIG, "no results: run the experiment first");
  return guarded(exp, IGOPT_ERR_IO, [&] { igopt::write_json(*exp->summary, path); });
}

int igopt_selftest(int verbose) {
  bool all_passed = true;
  for (const auto &check : igopt::run_selftest()) {
    if (verbose)
      std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                  check.detail.c_str());
    all_passed = all_passed && check.passed;
  }
  return all_passed ? IGOPT_OK : IGOPT_ERR_SELFTEST;
}

}  // extern "C"
