#include "igopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace igopt {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::map<std::string, std::string> kVariantAliases = {
    {"pbil", "pbil"},         {"cga", "pbil"},
    {"rankmu", "rankmu"},     {"purerankmu", "rankmu"},
    {"a", "reuse-mc"},        {"reuse-mc", "reuse-mc"},
    {"b", "reuse-c"},         {"reuse-c", "reuse-c"},
    {"hybrid", "hybrid"},
    {"c", "reuse-mc-r1"},     {"reuse-mc-r1", "reuse-mc-r1"},
    {"d", "reuse-c-r1"},      {"reuse-c-r1", "reuse-c-r1"},
    {"im", "im"},             {"importance-mixing", "im"},
};

std::string lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::TargetReached: return "target_reached";
    case StopReason::OptimumSampled: return "optimum_sampled";
    case StopReason::Budget: return "budget";
    case StopReason::EigenFloor: return "eigen_floor";
    case StopReason::Degeneracy: return "degeneracy";
  }
  return "unknown";
}

StopReason stop_reason_from_string(const std::string &s) {
  if (s == "target_reached") return StopReason::TargetReached;
  if (s == "optimum_sampled") return StopReason::OptimumSampled;
  if (s == "budget") return StopReason::Budget;
  if (s == "eigen_floor") return StopReason::EigenFloor;
  if (s == "degeneracy") return StopReason::Degeneracy;
  throw std::invalid_argument("unknown stop reason: " + s);
}

std::string canonical_variant(const std::string &name) {
  const auto it = kVariantAliases.find(lower(name));
  if (it == kVariantAliases.end()) {
    std::string msg = "unknown variant '" + name + "'; valid names:";
    for (const auto &v : known_variant_names()) msg += " " + v;
    throw std::invalid_argument(msg);
  }
  return it->second;
}

std::vector<std::string> known_variant_names() {
  return {"pbil", "cga", "rankmu", "reuse-mc", "reuse-c", "hybrid", "reuse-mc-r1", "reuse-c-r1", "im"};
}

AlgorithmKind algorithm_kind(const std::string &canonical) {
  return canonical == "pbil" ? AlgorithmKind::Pbil : AlgorithmKind::Cma;
}

CmaVariant cma_variant(const std::string &canonical) {
  if (canonical == "rankmu") return CmaVariant::PureRankMu;
  if (canonical == "reuse-mc") return CmaVariant::ReuseAll;
  if (canonical == "reuse-c") return CmaVariant::ReuseCov;
  if (canonical == "hybrid") return CmaVariant::Hybrid;
  if (canonical == "reuse-mc-r1") return CmaVariant::ReuseAllRankOne;
  if (canonical == "reuse-c-r1") return CmaVariant::ReuseCovRankOne;
  if (canonical == "im") return CmaVariant::ImportanceMixing;
  throw std::invalid_argument("not a CMA variant: " + canonical);
}

int default_lambda(int d) { return 4 + static_cast<int>(std::floor(3.0 * std::log(d))); }

void validate(const ExperimentConfig &config) {
  if (!is_known_function(config.function)) {
    std::string msg = "unknown function '" + config.function + "'; valid names:";
    for (const auto &n : known_function_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  canonical_variant(config.variant);
  const bool binary = is_binary_function(config.function);
  const bool pbil = algorithm_kind(canonical_variant(config.variant)) == AlgorithmKind::Pbil;
  if (binary != pbil)
    throw std::invalid_argument(binary ? "binary functions require the pbil/cga variant"
                                       : "continuous functions require a CMA variant");
  if (config.d < 1) throw std::invalid_argument("d must be >= 1");
  if (config.lambda < 2) throw std::invalid_argument("lambda must be >= 2");
  if (config.K < 0) throw std::invalid_argument("K must be >= 0");
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (pbil && !(config.eta > 0.0)) throw std::invalid_argument("binary runs need eta > 0");
  if (pbil && !(config.T > 0.0 && config.T < 0.5)) throw std::invalid_argument("T must be in (0, 1/2)");
  if (config.alpha < 0.0 || config.alpha > 1.0) throw std::invalid_argument("alpha must be in [0, 1]");
}

namespace {

struct ResolvedSpec {
  BenchmarkSpec bench;
  long long budget;
  double target;
};

ResolvedSpec resolve(const ExperimentConfig &config) {
  ResolvedSpec r{default_spec(config.function, config.d), 0, 0.0};
  r.budget = config.budget >= 0 ? config.budget : r.bench.budget;
  r.target = config.target >= 0.0 ? config.target : r.bench.target;
  return r;
}

TrialResult run_binary_trial(const ExperimentConfig &config, const ResolvedSpec &spec,
                             std::uint64_t seed) {
  Rng rng(seed);
  PbilOptimizer opt(config.d, config.lambda, config.K, config.eta, config.T, /*maximize=*/true);

  TrialResult result;
  result.seed = seed;
  result.best_f = -std::numeric_limits<double>::infinity();
  const double optimum = spec.bench.optimum;

  while (true) {
    if (result.evaluations >= spec.budget) {
      result.reason = StopReason::Budget;
      break;
    }
    const auto report = opt.step(
        [&](const BitVector &x) { return static_cast<double>(eval_binary(config.function, x)); },
        rng);
    result.evaluations += report.evaluations_consumed;
    ++result.iterations;
    result.best_f = std::max(result.best_f, report.best_f_in_step);
    if (result.best_f >= optimum) {
      result.success = true;
      result.reason = StopReason::OptimumSampled;
      break;
    }
  }
  return result;
}

TrialResult run_continuous_trial(const ExperimentConfig &config, const ResolvedSpec &spec,
                                 std::uint64_t seed) {
  Rng rng(seed);
  GaussianParams init;
  init.mean = Eigen::VectorXd(config.d);
  for (int i = 0; i < config.d; ++i)
    init.mean[i] = spec.bench.init_lo + (spec.bench.init_hi - spec.bench.init_lo) * uniform01(rng);
  const double sigma = (spec.bench.init_hi - spec.bench.init_lo) / 2.0;
  init.cov = sigma * sigma * Eigen::MatrixXd::Identity(config.d, config.d);

  CmaSettings settings;
  settings.d = config.d;
  settings.lambda = config.lambda;
  settings.K = config.K;
  settings.variant = cma_variant(canonical_variant(config.variant));
  settings.alpha = config.alpha;
  CmaOptimizer opt(settings, init);

  TrialResult result;
  result.seed = seed;
  result.best_f = std::numeric_limits<double>::infinity();

  while (true) {
    if (result.evaluations >= spec.budget) {
      result.reason = StopReason::Budget;
      break;
    }
    StepReport report;
    try {
      report = opt.step([&](const Eigen::VectorXd &x) { return eval_continuous(config.function, x); },
                        rng);
    } catch (const covariance_error &) {
      result.reason = StopReason::Degeneracy;
      break;
    }
    result.evaluations += report.evaluations_consumed;
    ++result.iterations;
    result.best_f = std::min(result.best_f, report.best_f_in_step);
    if (result.best_f < spec.target) {
      result.success = true;
      result.reason = StopReason::TargetReached;
      break;
    }
    if (opt.min_eig() < spec.bench.eigen_floor) {
      result.reason = StopReason::EigenFloor;
      break;
    }
  }
  return result;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig &config, std::uint64_t seed) {
  validate(config);
  const ResolvedSpec spec = resolve(config);
  return is_binary_function(config.function) ? run_binary_trial(config, spec, seed)
                                             : run_continuous_trial(config, spec, seed);
}

ExperimentSummary run_experiment(const ExperimentConfig &config, int jobs) {
  validate(config);
  std::vector<TrialResult> trials(static_cast<std::size_t>(config.trials));
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, config.trials);
  if (jobs == 1) {
    for (int i = 0; i < config.trials; ++i)
      trials[static_cast<std::size_t>(i)] = run_trial(config, config.seed + static_cast<std::uint64_t>(i));
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1))
          trials[static_cast<std::size_t>(i)] = run_trial(config, config.seed + static_cast<std::uint64_t>(i));
      });
    for (auto &t : workers) t.join();
  }
  return summarize(config, std::move(trials));
}

ExperimentSummary summarize(const ExperimentConfig &config, std::vector<TrialResult> trials) {
  ExperimentSummary s;
  s.config = config;
  s.trials = std::move(trials);
  double evals = 0.0;
  for (const auto &t : s.trials)
    if (t.success) {
      ++s.success_count;
      evals += static_cast<double>(t.evaluations);
    }
  s.success_probability = s.trials.empty() ? 0.0 : static_cast<double>(s.success_count) / s.trials.size();
  if (s.success_count > 0) {
    s.mean_evals_success = evals / s.success_count;
    s.has_metric = true;
    s.performance_metric = s.mean_evals_success / s.success_probability;
  } else {
    s.mean_evals_success = std::numeric_limits<double>::quiet_NaN();
    s.has_metric = false;
    s.performance_metric = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

std::string csv_header() {
  return "function,d,variant,lambda,K,eta,T,alpha,trial,seed,success,evaluations,best_f,iterations,reason";
}

std::string csv_row(const ExperimentConfig &config, const TrialResult &trial, int index) {
  std::ostringstream os;
  os << config.function << ',' << config.d << ',' << canonical_variant(config.variant) << ','
     << config.lambda << ',' << config.K << ',' << fmt_double(config.eta) << ','
     << fmt_double(config.T) << ',' << fmt_double(config.alpha) << ',' << index << ',' << trial.seed
     << ',' << (trial.success ? 1 : 0) << ',' << trial.evaluations << ',' << fmt_double(trial.best_f)
     << ',' << trial.iterations << ',' << to_string(trial.reason);
  return os.str();
}

void write_csv(const ExperimentSummary &summary, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << csv_header() << '\n';
  for (std::size_t i = 0; i < summary.trials.size(); ++i)
    out << csv_row(summary.config, summary.trials[i], static_cast<int>(i)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

nlohmann::json config_to_json(const ExperimentConfig &c) {
  return {{"function", c.function}, {"d", c.d},       {"variant", canonical_variant(c.variant)},
          {"lambda", c.lambda},     {"K", c.K},       {"eta", c.eta},
          {"T", c.T},               {"alpha", c.alpha}, {"trials", c.trials},
          {"seed", c.seed},         {"budget", c.budget}, {"target", c.target}};
}

ExperimentConfig config_from_json(const nlohmann::json &j) {
  ExperimentConfig c;
  c.function = j.at("function").get<std::string>();
  c.d = j.at("d").get<int>();
  c.variant = j.at("variant").get<std::string>();
  c.lambda = j.at("lambda").get<int>();
  c.K = j.at("K").get<int>();
  c.eta = j.at("eta").get<double>();
  c.T = j.at("T").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.trials = j.at("trials").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.budget = j.at("budget").get<long long>();
  c.target = j.at("target").get<double>();
  return c;
}

}  // namespace

void write_json(const ExperimentSummary &summary, const std::string &path) {
  nlohmann::json j;
  j["config"] = config_to_json(summary.config);
  j["trials"] = nlohmann::json::array();
  for (std::size_t i = 0; i < summary.trials.size(); ++i) {
    const auto &t = summary.trials[i];
    j["trials"].push_back({{"trial", i},
                           {"seed", t.seed},
                           {"success", t.success},
                           {"evaluations", t.evaluations},
                           {"best_f", t.best_f},
                           {"iterations", t.iterations},
                           {"reason", to_string(t.reason)}});
  }
  j["success_probability"] = summary.success_probability;
  j["mean_evals_success"] =
      summary.has_metric ? nlohmann::json(summary.mean_evals_success) : nlohmann::json(nullptr);
  j["performance_metric"] =
      summary.has_metric ? nlohmann::json(summary.performance_metric) : nlohmann::json(nullptr);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

ExperimentSummary read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<TrialResult> trials;
  for (const auto &t : j.at("trials")) {
    TrialResult r;
    r.seed = t.at("seed").get<std::uint64_t>();
    r.success = t.at("success").get<bool>();
    r.evaluations = t.at("evaluations").get<long long>();
    r.best_f = t.at("best_f").get<double>();
    r.iterations = t.at("iterations").get<long long>();
    r.reason = stop_reason_from_string(t.at("reason").get<std::string>());
    trials.push_back(r);
  }
  return summarize(config_from_json(j.at("config")), std::move(trials));
}

}  // namespace igopt
