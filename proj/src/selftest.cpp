#include "igopt/selftest.hpp"

#include <cmath>
#include <sstream>

#include "igopt/algorithms.hpp"
#include "igopt/benchmarks.hpp"
#include "igopt/mixture_estimators.hpp"

namespace igopt {

namespace {

SelfTestCheck check_plain_weight_sum(Rng &rng) {
  SelfTestCheck c{"plain weight sum telescopes to W(1) - W(0)", true, ""};
  const WeightScheme schemes[] = {WeightScheme::step_threshold(0.25), WeightScheme::log_half()};
  double worst = 0.0;
  for (int rep = 0; rep < 200 && c.passed; ++rep) {
    const int lambda = 2 + static_cast<int>(uniform01(rng) * 15);
    std::vector<double> f(static_cast<std::size_t>(lambda));
    for (auto &v : f) v = std::floor(uniform01(rng) * 5);  // tie-laden
    for (const auto &scheme : schemes) {
      const auto w = utility_hat_plain(rank_counts(f), scheme, lambda);
      double sum = 0.0;
      for (double wi : w) sum += wi / lambda;
      const double err = std::abs(sum - (scheme.W(1.0) - scheme.W(0.0)));
      worst = std::max(worst, err);
      if (err > 1e-12) c.passed = false;
    }
  }
  std::ostringstream os;
  os << "max |sum - (W(1)-W(0))| = " << worst;
  c.detail = os.str();
  return c;
}

SelfTestCheck check_reuse_weight_sum(Rng &rng) {
  SelfTestCheck c{"reuse weight sum matches W(q_max) - W(0)", true, ""};
  double worst = 0.0;
  for (int rep = 0; rep < 50 && c.passed; ++rep) {
    const int d = 4, lambda = 6, K = 3;
    ReuseArchive<Eigen::VectorXd> archive(K, lambda);
    GaussianParams p;
    p.mean = Eigen::VectorXd::Zero(d);
    p.cov = Eigen::MatrixXd::Identity(d, d);
    for (int gen = 0; gen <= K; ++gen) {
      for (int i = 0; i < d; ++i) p.mean[i] += 0.3 * (uniform01(rng) - 0.5);
      auto dist = std::make_shared<GaussianDensity>(p);
      std::vector<Eigen::VectorXd> xs;
      std::vector<double> fs;
      for (int i = 0; i < lambda; ++i) {
        xs.push_back(dist->sample(rng));
        fs.push_back(xs.back().squaredNorm());
      }
      archive.push([dist](const Eigen::VectorXd &x) { return dist->log_density(x); }, xs, fs);
    }
    const auto scheme = WeightScheme::log_half();
    const auto r = rhat(archive, scheme);
    const auto [lhs, rhs] = weight_sum_identity(archive, r, scheme);
    const double err = std::abs(lhs - rhs);
    worst = std::max(worst, err);
    if (err > 1e-9) c.passed = false;
  }
  std::ostringstream os;
  os << "max |lhs - rhs| = " << worst;
  c.detail = os.str();
  return c;
}

SelfTestCheck check_k0_reduction(Rng &rng) {
  SelfTestCheck c{"K = 0 reuse update equals the plain estimator", true, ""};
  const int d = 5, lambda = 8;
  for (int rep = 0; rep < 20 && c.passed; ++rep) {
    BernoulliParams theta;
    theta.theta = Eigen::VectorXd(d);
    for (int i = 0; i < d; ++i) theta.theta[i] = 0.2 + 0.6 * uniform01(rng);
    ReuseArchive<BitVector> archive(0, lambda);
    auto samples = bernoulli_sample(theta, lambda, rng);
    std::vector<double> fs;
    for (const auto &x : samples) fs.push_back(static_cast<double>(eval_binary("onemax", x)));
    BernoulliParams snap = theta;
    archive.push([snap](const BitVector &x) { return bernoulli_log_density(snap, x); }, samples, fs);

    const auto scheme = WeightScheme::step_threshold(0.25);
    const auto r = rhat(archive, scheme, /*minimize=*/false);
    const Eigen::VectorXd reuse = nat_grad_estimate(
        archive, r, [&theta](const BitVector &x) { return bernoulli_nat_grad(theta, x); });

    std::vector<double> neg;
    for (double v : fs) neg.push_back(-v);
    const auto what = utility_hat_plain(rank_counts(neg), scheme, lambda);
    Eigen::VectorXd plain = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < lambda; ++i)
      plain += (what[static_cast<std::size_t>(i)] / lambda) *
               bernoulli_nat_grad(theta, samples[static_cast<std::size_t>(i)]);
    if ((reuse.array() != plain.array()).any()) c.passed = false;
  }
  c.detail = c.passed ? "bitwise equal" : "mismatch";
  return c;
}

SelfTestCheck check_cga_equivalence() {
  SelfTestCheck c{"reuse PBIL (lambda=2, K=0) matches the compact GA", true, ""};
  const int d = 16;
  const double eta = 1.0 / d;
  const std::uint64_t seed = 20240517;

  Rng rng_a(seed);
  PbilOptimizer opt(d, 2, 0, eta, 0.25, /*maximize=*/true);
  auto objective = [](const BitVector &x) { return static_cast<double>(eval_binary("onemax", x)); };

  // Independent compact-GA loop sharing the sample stream.
  Rng rng_b(seed);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(d, 0.5);
  for (int it = 0; it < 200 && c.passed; ++it) {
    opt.step(objective, rng_a);

    BitVector x1(d), x2(d);
    for (int i = 0; i < d; ++i) x1[static_cast<std::size_t>(i)] = uniform01(rng_b) < p[i] ? 1 : 0;
    for (int i = 0; i < d; ++i) x2[static_cast<std::size_t>(i)] = uniform01(rng_b) < p[i] ? 1 : 0;
    const double f1 = objective(x1), f2 = objective(x2);
    if (f1 != f2) {
      const double w1 = f1 > f2 ? 1.0 : -1.0;
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i)
        acc[i] = (w1 / 2.0) * (static_cast<double>(x1[static_cast<std::size_t>(i)]) - p[i]) +
                 (-w1 / 2.0) * (static_cast<double>(x2[static_cast<std::size_t>(i)]) - p[i]);
      p += eta * acc;
    }
    for (int i = 0; i < d; ++i) p[i] = std::min(1.0 - 1.0 / d, std::max(1.0 / d, p[i]));

    if ((opt.params().theta.array() != p.array()).any()) c.passed = false;
  }
  c.detail = c.passed ? "200 iterations bitwise equal" : "trajectory diverged";
  return c;
}

SelfTestCheck check_estimator_unbiasedness(Rng &rng) {
  SelfTestCheck c{"mixture estimators unbiased on a Gaussian smoke test", true, ""};
  // Target N(0,1), proposals N(0,1) and N(1,1), g(x) = x; truth is 0.
  const int reps = 2000, n = 50;
  const double means[2] = {0.0, 1.0};
  auto pdf = [](double x, double m) {
    return std::exp(-0.5 * (x - m) * (x - m)) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  double sum1 = 0.0, sum2 = 0.0, sq1 = 0.0, sq2 = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<ProposalBatch> batches(2);
    for (int j = 0; j < 2; ++j) {
      auto &b = batches[static_cast<std::size_t>(j)];
      b.own_index = j;
      b.c = 0.5;
      b.proposal_density.assign(2, std::vector<double>(n));
      for (int i = 0; i < n; ++i) {
        const double x = means[j] + standard_normal(rng);
        b.g_values.push_back(x);
        b.target_density.push_back(pdf(x, 0.0));
        for (int k = 0; k < 2; ++k)
          b.proposal_density[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = pdf(x, means[k]);
      }
    }
    const double e1 = estimator_is1(batches), e2 = estimator_is2(batches);
    sum1 += e1;
    sum2 += e2;
    sq1 += e1 * e1;
    sq2 += e2 * e2;
  }
  const double m1 = sum1 / reps, m2 = sum2 / reps;
  const double v1 = sq1 / reps - m1 * m1, v2 = sq2 / reps - m2 * m2;
  const double se1 = std::sqrt(v1 / reps), se2 = std::sqrt(v2 / reps);
  std::ostringstream os;
  os << "mean IS1 = " << m1 << " (SE " << se1 << "), mean IS2 = " << m2 << " (SE " << se2 << ")";
  c.detail = os.str();
  if (std::abs(m1) > 4.0 * se1 || std::abs(m2) > 4.0 * se2) c.passed = false;
  if (v2 > v1 * 1.10) c.passed = false;
  return c;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest() {
  Rng rng(987654321);
  std::vector<SelfTestCheck> checks;
  checks.push_back(check_plain_weight_sum(rng));
  checks.push_back(check_reuse_weight_sum(rng));
  checks.push_back(check_k0_reduction(rng));
  checks.push_back(check_cga_equivalence());
  checks.push_back(check_estimator_unbiasedness(rng));
  return checks;
}

}  // namespace igopt
