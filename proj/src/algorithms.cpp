#include "igopt/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace igopt {

CmaRates learning_rates_rank_mu(int d, int /*lambda*/, double mu_eff) {
  CmaRates r;
  r.c_m = 1.0;
  r.c_mu = 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((d + 2.0) * (d + 2.0) + 2.0 * mu_eff / 2.0);
  return r;
}

CmaRates learning_rates_hybrid(int d, int lambda, double mu_eff) {
  CmaRates r;
  r.c_m = 1.0;
  r.c_c = (4.0 + mu_eff / d) / (lambda + 4.0 + 2.0 * mu_eff / lambda);
  r.c_1 = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff);
  r.c_mu = std::min(1.0 - r.c_1,
                    2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((d + 2.0) * (d + 2.0) + 2.0 * mu_eff / 2.0));
  return r;
}

Eigen::VectorXd evolution_path_update(const Eigen::VectorXd &pc, double c_c, double mu_eff,
                                      const Eigen::VectorXd &weighted_step) {
  if (!(c_c > 0.0 && c_c <= 1.0)) throw std::invalid_argument("evolution_path_update: c_c must be in (0,1]");
  return (1.0 - c_c) * pc + std::sqrt(c_c * (2.0 - c_c) * mu_eff) * weighted_step;
}

PbilOptimizer::PbilOptimizer(int d, int lambda, int K, double eta, double T, bool maximize)
    : d_(d),
      lambda_(lambda),
      eta_(eta),
      maximize_(maximize),
      scheme_(WeightScheme::step_threshold(T)),
      archive_(K, lambda) {
  if (d < 1) throw std::invalid_argument("PbilOptimizer: d must be >= 1");
  if (lambda < 2) throw std::invalid_argument("PbilOptimizer: lambda must be >= 2");
  theta_.theta = Eigen::VectorXd::Constant(d, 0.5);
}

StepReport PbilOptimizer::step(const Objective &objective, Rng &rng) {
  auto samples = bernoulli_sample(theta_, lambda_, rng);
  std::vector<double> fvals;
  fvals.reserve(samples.size());
  for (const auto &x : samples) fvals.push_back(objective(x));

  StepReport report;
  report.evaluations_consumed = lambda_;
  report.best_f_in_step = maximize_ ? *std::max_element(fvals.begin(), fvals.end())
                                    : *std::min_element(fvals.begin(), fvals.end());

  BernoulliParams snapshot = theta_;
  archive_.push([snapshot](const BitVector &x) { return bernoulli_log_density(snapshot, x); },
                std::move(samples), std::move(fvals));

  const auto r = rhat(archive_, scheme_, /*minimize=*/!maximize_);
  const Eigen::VectorXd delta = nat_grad_estimate(
      archive_, r, [this](const BitVector &x) { return bernoulli_nat_grad(theta_, x); });
  theta_.theta += eta_ * delta;
  clamp_bernoulli(theta_, d_);
  return report;
}

bool variant_uses_reuse(CmaVariant v) {
  return v == CmaVariant::ReuseAll || v == CmaVariant::ReuseCov ||
         v == CmaVariant::ReuseAllRankOne || v == CmaVariant::ReuseCovRankOne;
}

bool variant_uses_rank_one(CmaVariant v) {
  return v == CmaVariant::Hybrid || v == CmaVariant::ReuseAllRankOne ||
         v == CmaVariant::ReuseCovRankOne;
}

namespace {
bool variant_reuses_mean(CmaVariant v) {
  return v == CmaVariant::ReuseAll || v == CmaVariant::ReuseAllRankOne;
}
}  // namespace

CmaOptimizer::CmaOptimizer(const CmaSettings &settings, GaussianParams init)
    : settings_(settings),
      weights_(cma_standard_weights(settings.lambda)),
      mu_eff_(mueff(weights_)),
      rates_(variant_uses_rank_one(settings.variant)
                 ? learning_rates_hybrid(settings.d, settings.lambda, mueff(cma_standard_weights(settings.lambda)))
                 : learning_rates_rank_mu(settings.d, settings.lambda, mueff(cma_standard_weights(settings.lambda)))),
      dist_(std::move(init)),
      pc_(Eigen::VectorXd::Zero(settings.d)),
      archive_(variant_uses_reuse(settings.variant) ? settings.K : 0, settings.lambda) {
  if (settings_.d < 1) throw std::invalid_argument("CmaOptimizer: d must be >= 1");
  if (dist_.dim() != settings_.d || dist_.cov.rows() != settings_.d)
    throw dimension_error("CmaOptimizer: init params do not match d");
  if (settings_.c1_override) {
    rates_.c_1 = *settings_.c1_override;
    if (variant_uses_rank_one(settings_.variant))
      rates_.c_mu = std::min(1.0 - rates_.c_1,
                             learning_rates_rank_mu(settings_.d, settings_.lambda, mu_eff_).c_mu);
  }
}

double CmaOptimizer::min_eig() const { return min_eigenvalue(dist_.cov); }

void CmaOptimizer::set_params(GaussianParams p) {
  if (p.dim() != settings_.d || p.cov.rows() != settings_.d || p.cov.cols() != settings_.d)
    throw dimension_error("CmaOptimizer::set_params: dimension mismatch");
  dist_ = std::move(p);
}

StepReport CmaOptimizer::step(const Objective &objective, Rng &rng) {
  if (settings_.variant == CmaVariant::ImportanceMixing) return importance_mixing_step(objective, rng);

  auto sampler = std::make_shared<GaussianDensity>(dist_);
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(static_cast<std::size_t>(settings_.lambda));
  for (int i = 0; i < settings_.lambda; ++i) xs.push_back(sampler->sample(rng));
  std::vector<double> fvals;
  fvals.reserve(xs.size());
  for (const auto &x : xs) fvals.push_back(objective(x));

  StepReport report;
  report.evaluations_consumed = settings_.lambda;
  report.best_f_in_step = *std::min_element(fvals.begin(), fvals.end());

  if (variant_uses_reuse(settings_.variant))
    archive_.push([sampler](const Eigen::VectorXd &x) { return sampler->log_density(x); }, xs, fvals);

  apply_update(xs, fvals);
  return report;
}

void CmaOptimizer::apply_update(const std::vector<Eigen::VectorXd> &xs,
                                const std::vector<double> &fvals) {
  const int lambda = static_cast<int>(xs.size());
  const Eigen::VectorXd m = dist_.mean;
  const Eigen::MatrixXd C = dist_.cov;

  // CMA selection weights assigned by rank among this population.
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
  std::vector<double> w_by_sample(xs.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    w_by_sample[order[rank]] = weights_[rank];

  Eigen::VectorXd weighted_step = Eigen::VectorXd::Zero(settings_.d);
  for (int i = 0; i < lambda; ++i) weighted_step += w_by_sample[static_cast<std::size_t>(i)] * (xs[static_cast<std::size_t>(i)] - m);

  const bool reuse = variant_uses_reuse(settings_.variant);
  std::vector<std::vector<double>> r;
  if (reuse) r = rhat(archive_, WeightScheme::log_half(), /*minimize=*/true);

  Eigen::VectorXd mean_delta;
  if (variant_reuses_mean(settings_.variant)) {
    mean_delta =
        nat_grad_estimate(archive_, r, [&m](const Eigen::VectorXd &x) { return (x - m).eval(); });
  } else {
    mean_delta = weighted_step;
  }

  Eigen::MatrixXd rank_mu;
  if (reuse) {
    rank_mu = nat_grad_estimate(archive_, r, [&m, &C](const Eigen::VectorXd &x) {
      const Eigen::VectorXd y = x - m;
      return (y * y.transpose() - C).eval();
    });
  } else {
    rank_mu = Eigen::MatrixXd::Zero(settings_.d, settings_.d);
    for (int i = 0; i < lambda; ++i) {
      const Eigen::VectorXd y = xs[static_cast<std::size_t>(i)] - m;
      rank_mu += w_by_sample[static_cast<std::size_t>(i)] * (y * y.transpose() - C);
    }
  }

  Eigen::MatrixXd new_cov = C;
  if (variant_uses_rank_one(settings_.variant)) {
    // The evolution path always follows the current samples with CMA weights.
    pc_ = evolution_path_update(pc_, rates_.c_c, mu_eff_, weighted_step);
    if (rates_.c_1 != 0.0) new_cov += rates_.c_1 * (pc_ * pc_.transpose() - C);
  }
  new_cov += rates_.c_mu * rank_mu;

  dist_.mean = m + rates_.c_m * mean_delta;
  dist_.cov = new_cov;
  symmetrize(dist_.cov);
}

StepReport CmaOptimizer::importance_mixing_step(const Objective &objective, Rng &rng) {
  GaussianDensity current(dist_);
  const GaussianParams sampled_from = dist_;
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fvals;
  long long fresh = 0;
  double best_fresh = std::numeric_limits<double>::infinity();

  if (previous_) {
    GaussianDensity prev(previous_->sampled_from);
    // Phase 1: keep old points by likelihood ratio, reusing their f-values.
    for (std::size_t i = 0; i < previous_->xs.size(); ++i) {
      const Eigen::VectorXd &x = previous_->xs[i];
      const double ratio = std::exp(current.log_density(x) - prev.log_density(x));
      if (uniform01(rng) < std::min(1.0, (1.0 - settings_.alpha) * ratio)) {
        xs.push_back(x);
        fvals.push_back(previous_->fvals[i]);
      }
    }
    // Phase 2: refill from the current distribution; only accepted points are
    // evaluated.
    const long long guard = kDrawBudgetPerLambda * settings_.lambda;
    long long attempts = 0;
    while (static_cast<int>(xs.size()) < settings_.lambda) {
      const Eigen::VectorXd x = current.sample(rng);
      bool accept;
      if (attempts >= guard) {
        accept = true;  // forced refresh, see the draw-budget guard
      } else {
        const double p =
            std::max(settings_.alpha, 1.0 - std::exp(prev.log_density(x) - current.log_density(x)));
        accept = uniform01(rng) < p;
      }
      ++attempts;
      if (accept) {
        const double f = objective(x);
        xs.push_back(x);
        fvals.push_back(f);
        ++fresh;
        best_fresh = std::min(best_fresh, f);
      }
    }
  } else {
    for (int i = 0; i < settings_.lambda; ++i) {
      xs.push_back(current.sample(rng));
      fvals.push_back(objective(xs.back()));
      ++fresh;
      best_fresh = std::min(best_fresh, fvals.back());
    }
  }

  apply_update(xs, fvals);
  previous_ = Population{std::move(xs), std::move(fvals), sampled_from};

  StepReport report;
  report.evaluations_consumed = fresh;
  report.best_f_in_step = best_fresh;
  return report;
}

}  // namespace igopt
