#ifndef IGOPT_ALGORITHMS_HPP
#define IGOPT_ALGORITHMS_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>

#include "igopt/distributions.hpp"
#include "igopt/reuse.hpp"
#include "igopt/rng.hpp"
#include "igopt/utility.hpp"

namespace igopt {

struct StepReport {
  long long evaluations_consumed = 0;
  double best_f_in_step = 0.0;  // best newly evaluated value, in the problem's sense
};

struct CmaRates {
  double c_m = 1.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
};

// Default rates for the rank-mu only update (c_1 = c_c = 0).
CmaRates learning_rates_rank_mu(int d, int lambda, double mu_eff);

// Default rates when the rank-one update is active.
CmaRates learning_rates_hybrid(int d, int lambda, double mu_eff);

// pc <- (1 - c_c) pc + sqrt(c_c (2 - c_c) mu_eff) * weighted_step
Eigen::VectorXd evolution_path_update(const Eigen::VectorXd &pc, double c_c, double mu_eff,
                                      const Eigen::VectorXd &weighted_step);

// Reuse PBIL: Bernoulli IGO with the step-threshold utility and the
// importance-sampling archive. lambda = 2, K = 0, T = 0.25 is the compact GA.
class PbilOptimizer {
 public:
  using Objective = std::function<double(const BitVector &)>;

  PbilOptimizer(int d, int lambda, int K, double eta, double T, bool maximize = true);

  StepReport step(const Objective &objective, Rng &rng);

  const BernoulliParams &params() const { return theta_; }
  const ReuseArchive<BitVector> &archive() const { return archive_; }

 private:
  int d_;
  int lambda_;
  double eta_;
  bool maximize_;
  WeightScheme scheme_;
  BernoulliParams theta_;
  ReuseArchive<BitVector> archive_;
};

enum class CmaVariant {
  PureRankMu,       // rank-mu update with CMA weights, current samples only
  ReuseAll,         // (A): mean and covariance via the reuse estimator
  ReuseCov,         // (B): covariance via reuse, mean from current samples
  Hybrid,           // rank-mu + rank-one, no reuse
  ReuseAllRankOne,  // (C): (A) + rank-one update
  ReuseCovRankOne,  // (D): (B) + rank-one update
  ImportanceMixing  // accept/reject population recycling, rank-mu update
};

bool variant_uses_reuse(CmaVariant v);
bool variant_uses_rank_one(CmaVariant v);

struct CmaSettings {
  int d = 0;
  int lambda = 0;
  int K = 0;
  CmaVariant variant = CmaVariant::PureRankMu;
  double alpha = 0.0;                  // importance-mixing minimal refresh rate
  std::optional<double> c1_override;   // forces c_1; 0 disables the rank-one term
};

class CmaOptimizer {
 public:
  using Objective = std::function<double(const Eigen::VectorXd &)>;

  CmaOptimizer(const CmaSettings &settings, GaussianParams init);

  // Throws covariance_error when C is no longer factorizable.
  StepReport step(const Objective &objective, Rng &rng);

  const GaussianParams &params() const { return dist_; }
  // Overwrites the search distribution; retained populations and the
  // evolution path are kept.
  void set_params(GaussianParams p);
  const Eigen::VectorXd &evolution_path() const { return pc_; }
  const CmaRates &rates() const { return rates_; }
  double mu_eff() const { return mu_eff_; }
  double min_eig() const;

 private:
  StepReport importance_mixing_step(const Objective &objective, Rng &rng);
  void apply_update(const std::vector<Eigen::VectorXd> &xs, const std::vector<double> &fvals);

  CmaSettings settings_;
  std::vector<double> weights_;  // CMA weights by rank
  double mu_eff_;
  CmaRates rates_;
  GaussianParams dist_;
  Eigen::VectorXd pc_;
  ReuseArchive<Eigen::VectorXd> archive_;

  // importance-mixing state: last population with the distribution it was
  // assembled under
  struct Population {
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fvals;
    GaussianParams sampled_from;
  };
  std::optional<Population> previous_;

  // Phase-2 draw budget per iteration; exceeding it forces one fresh
  // evaluation so alpha = 0 with coinciding distributions cannot stall.
  static constexpr long long kDrawBudgetPerLambda = 1000;
};

}  // namespace igopt

#endif
