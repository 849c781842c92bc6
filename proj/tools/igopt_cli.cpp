// Benchmark CLI for the igopt library. Talks to the core through the C API.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitSelftest = 3;

struct ExperimentHandle {
  igopt_experiment *ptr;
  ExperimentHandle() : ptr(igopt_experiment_new()) {}
  ~ExperimentHandle() { igopt_experiment_free(ptr); }
  ExperimentHandle(const ExperimentHandle &) = delete;
  ExperimentHandle &operator=(const ExperimentHandle &) = delete;
};

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Flat key = value document; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    kv[trim(line.substr(0, eq))] = value;
  }
  return kv;
}

// eta is parameterized in units of 1/d in the binary experiments, so accept
// "a/d" as well as a plain number.
double resolve_eta(const std::string &expr, int d) {
  const auto slash = expr.find("/d");
  if (slash != std::string::npos && slash + 2 == expr.size()) {
    const double num = std::stod(expr.substr(0, slash));
    if (d < 1) throw std::runtime_error("eta expression '" + expr + "' needs d to be set first");
    return num / d;
  }
  return std::stod(expr);
}

int set_or_die(igopt_experiment *exp, const std::string &key, const std::string &value) {
  const int rc = igopt_experiment_set(exp, key.c_str(), value.c_str());
  if (rc != IGOPT_OK) std::cerr << "error: " << key << ": " << igopt_error_message(exp) << "\n";
  return rc;
}

struct RunOptions {
  std::string config_file;
  std::map<std::string, std::string> overrides;  // flag values, win over the file
  std::string out = "results";
  int jobs = 1;
};

// Applies config file then flag overrides; eta expressions are resolved once
// d is known.
int configure(igopt_experiment *exp, const RunOptions &opt) {
  std::map<std::string, std::string> kv;
  if (!opt.config_file.empty()) {
    try {
      kv = parse_config_file(opt.config_file);
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  for (const auto &[k, v] : opt.overrides) kv[k] = v;

  int d = 0;
  if (auto it = kv.find("d"); it != kv.end()) {
    try {
      d = std::stoi(it->second);
    } catch (const std::exception &) {
      std::cerr << "error: d: not an integer: " << it->second << "\n";
      return kExitConfig;
    }
  }
  for (auto &[k, v] : kv) {
    std::string value = v;
    if (k == "eta") {
      try {
        value = std::to_string(resolve_eta(v, d));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", resolve_eta(v, d));
        value = buf;
      } catch (const std::exception &e) {
        std::cerr << "error: eta: " << e.what() << "\n";
        return kExitConfig;
      }
    }
    if (set_or_die(exp, k, value) != IGOPT_OK) return kExitConfig;
  }
  return kExitOk;
}

int write_outputs(igopt_experiment *exp, const std::string &out_base) {
  const auto parent = std::filesystem::path(out_base).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (igopt_write_csv(exp, (out_base + ".csv").c_str()) != IGOPT_OK ||
      igopt_write_json(exp, (out_base + ".json").c_str()) != IGOPT_OK) {
    std::cerr << "error: " << igopt_error_message(exp) << "\n";
    return kExitIo;
  }
  return kExitOk;
}

void print_summary_line(igopt_experiment *exp) {
  double metric = 0.0;
  const bool has_metric = igopt_performance_metric(exp, &metric) == IGOPT_OK;
  std::printf("trials=%d successes=%d success_probability=%.4f", igopt_trial_count(exp),
              igopt_success_count(exp), igopt_success_probability(exp));
  if (has_metric)
    std::printf(" mean_evals_success=%.1f performance=%.1f\n", igopt_mean_evaluations(exp), metric);
  else
    std::printf(" performance=n/a (no successful trial)\n");
}

int cmd_run(const RunOptions &opt) {
  ExperimentHandle exp;
  if (const int rc = configure(exp.ptr, opt); rc != kExitOk) return rc;
  if (igopt_experiment_run(exp.ptr, opt.jobs) != IGOPT_OK) {
    std::cerr << "error: " << igopt_error_message(exp.ptr) << "\n";
    return kExitConfig;
  }
  print_summary_line(exp.ptr);
  return write_outputs(exp.ptr, opt.out);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string sanitize(std::string s) {
  for (char &c : s)
    if (c == '/' || c == ' ') c = '-';
  return s;
}

int cmd_sweep(const std::string &sweep_file, int jobs) {
  std::map<std::string, std::string> kv;
  try {
    kv = parse_config_file(sweep_file);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string out_dir = kv.count("out") ? kv["out"] : "sweep";
  kv.erase("out");

  // Axes: variant, K, lambda, eta. Everything else is a shared base value.
  auto axis = [&](const char *key, const char *fallback) {
    std::vector<std::string> vals =
        kv.count(key) ? split_list(kv[key]) : std::vector<std::string>{fallback};
    kv.erase(key);
    return vals;
  };
  const auto variants = axis("variant", "");
  const auto ks = axis("K", "0");
  const auto lambdas = axis("lambda", "default");
  const auto etas = axis("eta", "0");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream table(out_dir + "/sweep.csv");
  if (!table) {
    std::cerr << "error: cannot write " << out_dir << "/sweep.csv\n";
    return kExitIo;
  }
  table << "variant,K,lambda,eta,status,trials,successes,success_probability,"
           "mean_evals_success,performance_metric\n";

  int rc_all = kExitOk;
  for (const auto &variant : variants)
    for (const auto &k : ks)
      for (const auto &lambda : lambdas)
        for (const auto &eta : etas) {
          const std::string cell = sanitize(variant) + "_K" + k + "_lam" + sanitize(lambda) +
                                   "_eta" + sanitize(eta);
          const std::string base = out_dir + "/" + cell;
          RunOptions opt;
          opt.overrides = kv;
          if (!variant.empty()) opt.overrides["variant"] = variant;
          opt.overrides["K"] = k;
          opt.overrides["lambda"] = lambda;
          if (eta != "0") opt.overrides["eta"] = eta;
          opt.out = base;
          opt.jobs = jobs;

          std::string status = "ok";
          ExperimentHandle exp;
          if (std::filesystem::exists(base + ".csv") && std::filesystem::exists(base + ".json")) {
            status = "cached";
            std::printf("skip %s (already done)\n", cell.c_str());
          } else if (configure(exp.ptr, opt) != kExitOk ||
                     igopt_experiment_run(exp.ptr, jobs) != IGOPT_OK) {
            status = std::string("error: ") + igopt_error_message(exp.ptr);
            rc_all = kExitOk;  // per-cell failures are recorded, the sweep continues
          } else {
            std::printf("%s: ", cell.c_str());
            print_summary_line(exp.ptr);
            if (write_outputs(exp.ptr, base) != kExitOk) status = "error: write failed";
          }

          table << variant << ',' << k << ',' << lambda << ',' << eta << ',' << status << ',';
          if (status == "ok") {
            double metric = 0.0;
            const bool has = igopt_performance_metric(exp.ptr, &metric) == IGOPT_OK;
            table << igopt_trial_count(exp.ptr) << ',' << igopt_success_count(exp.ptr) << ','
                  << igopt_success_probability(exp.ptr) << ',';
            if (has)
              table << igopt_mean_evaluations(exp.ptr) << ',' << metric << '\n';
            else
              table << ",\n";
          } else {
            table << ",,,,\n";
          }
        }
  return rc_all;
}

struct AggKey {
  std::string function, variant;
  int d, lambda, K;
  std::string eta, T, alpha;
  bool operator<(const AggKey &o) const {
    return std::tie(function, d, variant, lambda, K, eta, T, alpha) <
           std::tie(o.function, o.d, o.variant, o.lambda, o.K, o.eta, o.T, o.alpha);
  }
};

struct AggValue {
  long long trials = 0, successes = 0;
  double success_evals = 0.0;
};

int cmd_report(const std::vector<std::string> &inputs, const std::string &out_path) {
  std::vector<std::string> files;
  for (const auto &input : inputs) {
    if (std::filesystem::is_directory(input)) {
      for (const auto &entry : std::filesystem::directory_iterator(input))
        if (entry.path().extension() == ".csv" && entry.path().filename() != "sweep.csv")
          files.push_back(entry.path().string());
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());

  std::map<AggKey, AggValue> agg;
  for (const auto &file : files) {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "error: cannot open " << file << "\n";
      return kExitIo;
    }
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {
        first = false;
        continue;  // header
      }
      auto cols = split_list(line);
      if (cols.size() < 15) continue;
      AggKey key{cols[0], cols[2], std::stoi(cols[1]), std::stoi(cols[3]), std::stoi(cols[4]),
                 cols[5], cols[6], cols[7]};
      auto &v = agg[key];
      ++v.trials;
      if (cols[10] == "1") {
        ++v.successes;
        v.success_evals += std::stod(cols[11]);
      }
    }
  }

  std::ostringstream os;
  os << "function,d,variant,lambda,K,eta,T,alpha,trials,successes,success_probability,"
        "mean_evals_success,performance_metric\n";
  for (const auto &[key, v] : agg) {
    const double p = v.trials ? static_cast<double>(v.successes) / v.trials : 0.0;
    os << key.function << ',' << key.d << ',' << key.variant << ',' << key.lambda << ',' << key.K
       << ',' << key.eta << ',' << key.T << ',' << key.alpha << ',' << v.trials << ','
       << v.successes << ',' << p << ',';
    if (v.successes > 0) {
      const double mean = v.success_evals / v.successes;
      os << mean << ',' << mean / p << '\n';
    } else {
      os << ",\n";
    }
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitIo;
    }
    out << os.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Black-box optimization benchmark runner (IGO with sample reuse)"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto *run = app.add_subcommand("run", "run one experiment and persist CSV + JSON results");
  std::map<std::string, std::string> flags;
  run->add_option("--config", run_opt.config_file, "flat key = value config file");
  for (const char *key : {"function", "variant", "lambda", "eta", "T", "alpha"})
    run->add_option_function<std::string>(
        std::string("--") + key, [&flags, key](const std::string &v) { flags[key] = v; });
  for (const char *key : {"d", "K", "trials", "seed", "budget", "target"})
    run->add_option_function<std::string>(
        std::string("--") + key, [&flags, key](const std::string &v) { flags[key] = v; });
  run->add_option("--out", run_opt.out, "output path base (writes <out>.csv and <out>.json)");
  run->add_option("--jobs", run_opt.jobs, "worker threads for trials");

  std::string sweep_file;
  int sweep_jobs = 1;
  auto *sweep = app.add_subcommand("sweep", "run a parameter grid from a sweep file");
  sweep->add_option("file", sweep_file, "sweep description file")->required();
  sweep->add_option("--jobs", sweep_jobs, "worker threads for trials");

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto *report = app.add_subcommand("report", "re-aggregate result CSVs into one table");
  report->add_option("inputs", report_inputs, "CSV files or result directories")->required();
  report->add_option("--out", report_out, "write the table here instead of stdout");

  auto *selftest = app.add_subcommand("selftest", "run the fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    run_opt.overrides = flags;
    return cmd_run(run_opt);
  }
  if (sweep->parsed()) return cmd_sweep(sweep_file, sweep_jobs);
  if (report->parsed()) return cmd_report(report_inputs, report_out);
  if (selftest->parsed())
    return igopt_selftest(1) == IGOPT_OK ? kExitOk : kExitSelftest;
  return kExitConfig;
}
