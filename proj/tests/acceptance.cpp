// End-to-end acceptance suite. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails.
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "igopt/algorithms.hpp"
#include "igopt/benchmarks.hpp"
#include "igopt/distributions.hpp"
#include "igopt/harness.hpp"
#include "igopt/mixture_estimators.hpp"
#include "igopt/reuse.hpp"
#include "igopt/rng.hpp"
#include "igopt/utility.hpp"

using namespace igopt;

namespace {

struct Criterion {
  std::string name;
  bool passed = false;
  std::string detail;
};

double onemax_d(const BitVector &x) {
  double s = 0.0;
  for (auto b : x) s += b;
  return s;
}

int worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(std::min(hw, 16u));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Two-sample binary optimizer vs an independently written +/-1 frequency
//    update, tracked bitwise over 500 iterations.
// ---------------------------------------------------------------------------

Criterion criterion_two_sample_equivalence() {
  Criterion c{"two-sample binary optimizer equals the +/-1 frequency-update reference bitwise"};
  const int d = 64, iters = 500;
  const double eta = 1.0 / d;
  PbilOptimizer opt(d, 2, 0, eta, 0.25, /*maximize=*/true);
  Rng rng(20240625), shadow(20240625);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(d, 0.5);
  const double lo = 1.0 / d, hi = 1.0 - 1.0 / d;
  for (int it = 0; it < iters; ++it) {
    opt.step(onemax_d, rng);

    BitVector x1(static_cast<std::size_t>(d)), x2(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) x1[static_cast<std::size_t>(i)] = uniform01(shadow) < p[i] ? 1 : 0;
    for (int i = 0; i < d; ++i) x2[static_cast<std::size_t>(i)] = uniform01(shadow) < p[i] ? 1 : 0;
    const double f1 = onemax_d(x1), f2 = onemax_d(x2);
    double c1 = 0.0, c2 = 0.0;
    if (f1 > f2) {
      c1 = 0.5;
      c2 = -0.5;
    } else if (f2 > f1) {
      c1 = -0.5;
      c2 = 0.5;
    }
    Eigen::VectorXd g1(d), g2(d);
    for (int i = 0; i < d; ++i) {
      g1[i] = static_cast<double>(x1[static_cast<std::size_t>(i)]) - p[i];
      g2[i] = static_cast<double>(x2[static_cast<std::size_t>(i)]) - p[i];
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    acc += c1 * g1;
    acc += c2 * g2;
    p += eta * acc;
    for (int i = 0; i < d; ++i) p[i] = std::min(hi, std::max(lo, p[i]));

    for (int i = 0; i < d; ++i)
      if (opt.params().theta[i] != p[i]) {
        c.detail = "diverged at iteration " + std::to_string(it) + ", coordinate " + std::to_string(i);
        return c;
      }
  }
  c.passed = true;
  c.detail = std::to_string(iters) + " iterations bitwise identical";
  return c;
}

// ---------------------------------------------------------------------------
// 2. Weight-sum identities: the plain normalized utilities telescope to
//    W(1) - W(0); the reuse coefficients telescope to W at the largest
//    pooled quantile.
// ---------------------------------------------------------------------------

Criterion criterion_weight_sum_identities() {
  Criterion c{"normalized utility sums telescope (plain 1e-12, reuse 1e-9)"};
  Rng rng(7321);
  double worst_plain = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int lambda = 2 + static_cast<int>(uniform01(rng) * 18);
    std::vector<double> f;
    for (int i = 0; i < lambda; ++i) f.push_back(std::floor(uniform01(rng) * 5.0));
    for (const auto &scheme :
         {WeightScheme::step_threshold(0.25), WeightScheme::log_half()}) {
      const auto w = utility_hat_plain(rank_counts(f), scheme, lambda);
      double s = 0.0;
      for (double v : w) s += v / lambda;
      worst_plain = std::max(worst_plain, std::abs(s - (scheme.W(1.0) - scheme.W(0.0))));
    }
  }
  if (worst_plain >= 1e-12) {
    c.detail = "plain-path residual " + fmt(worst_plain);
    return c;
  }

  double worst_reuse = 0.0;
  const int Ks[3] = {1, 3, 5};
  for (int rep = 0; rep < 1000; ++rep) {
    const int K = Ks[rep % 3];
    const int lambda = 4;
    ReuseArchive<Eigen::VectorXd> archive(K, lambda);
    GaussianParams p;
    p.mean = Eigen::VectorXd::Zero(2);
    p.cov = Eigen::MatrixXd::Identity(2, 2);
    for (int g = 0; g < K + 1; ++g) {
      auto dens = std::make_shared<GaussianDensity>(p);
      std::vector<Eigen::VectorXd> xs;
      std::vector<double> fv;
      for (int i = 0; i < lambda; ++i) {
        xs.push_back(dens->sample(rng));
        const double f = xs.back().squaredNorm();
        fv.push_back(rep % 2 == 0 ? std::floor(2.0 * f) : f);
      }
      archive.push([dens](const Eigen::VectorXd &x) { return dens->log_density(x); }, xs, fv);
      p.mean.array() += 0.4 * (uniform01(rng) - 0.5);
      p.cov *= 0.85 + 0.3 * uniform01(rng);
    }
    for (const auto &scheme :
         {WeightScheme::log_half(), WeightScheme::step_threshold(0.25)}) {
      const auto r = rhat(archive, scheme, true);
      const auto [lhs, rhs] = weight_sum_identity(archive, r, scheme, true);
      worst_reuse = std::max(worst_reuse, std::abs(lhs - rhs));
    }
  }
  c.passed = worst_reuse < 1e-9;
  c.detail = "worst plain residual " + fmt(worst_plain) + ", worst reuse residual " + fmt(worst_reuse);
  return c;
}

// ---------------------------------------------------------------------------
// 3. Both mixture importance-sampling estimators are unbiased, and the
//    mixture-denominator form never has more variance.
// ---------------------------------------------------------------------------

double normal_pdf(double x, double mu) {
  return std::exp(-0.5 * (x - mu) * (x - mu)) / std::sqrt(2.0 * M_PI);
}

double simpson_truth(const std::function<double(double)> &g) {
  // integral of g(x) phi(x) over [-8, 8] by composite Simpson
  const int n = 4000;  // even
  const double a = -8.0, b = 8.0, h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * g(x) * normal_pdf(x, 0.0);
  }
  return s * h / 3.0;
}

Criterion criterion_mixture_estimator_variance() {
  Criterion c{"mixture estimators: unbiased means, mixture form has <= 1.05x the variance"};
  Rng rng(5150);
  const std::vector<double> mus{0.0, 1.0, 2.0};
  const int n = 200, reps = 20000;
  std::ostringstream detail;
  bool ok = true;
  for (int which = 0; which < 2; ++which) {
    auto g = [which](double x) { return which == 0 ? x : x * x; };
    const double truth = simpson_truth(g);
    double s1 = 0.0, s2 = 0.0, ss1 = 0.0, ss2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<ProposalBatch> batches(mus.size());
      for (std::size_t j = 0; j < mus.size(); ++j) {
        auto &b = batches[j];
        b.own_index = static_cast<int>(j);
        b.c = 1.0 / static_cast<double>(mus.size());
        b.proposal_density.assign(mus.size(), std::vector<double>(static_cast<std::size_t>(n)));
        b.g_values.reserve(static_cast<std::size_t>(n));
        b.target_density.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          const double x = mus[j] + standard_normal(rng);
          b.g_values.push_back(g(x));
          b.target_density.push_back(normal_pdf(x, 0.0));
          for (std::size_t l = 0; l < mus.size(); ++l)
            b.proposal_density[l][static_cast<std::size_t>(i)] = normal_pdf(x, mus[l]);
        }
      }
      const double v1 = estimator_is1(batches);
      const double v2 = estimator_is2(batches);
      s1 += v1;
      s2 += v2;
      ss1 += v1 * v1;
      ss2 += v2 * v2;
    }
    const double m1 = s1 / reps, m2 = s2 / reps;
    const double var1 = ss1 / reps - m1 * m1;
    const double var2 = ss2 / reps - m2 * m2;
    const double se1 = std::sqrt(var1 / reps), se2 = std::sqrt(var2 / reps);
    const bool mean_ok = std::abs(m1 - truth) < 3.0 * se1 && std::abs(m2 - truth) < 3.0 * se2;
    const bool var_ok = var2 <= 1.05 * var1;
    ok = ok && mean_ok && var_ok;
    detail << (which == 0 ? "g=x: " : "; g=x^2: ") << "truth " << fmt(truth) << ", means "
           << fmt(m1) << "/" << fmt(m2) << ", vars " << fmt(var1) << "/" << fmt(var2);
  }
  c.passed = ok;
  c.detail = detail.str();
  return c;
}

// ---------------------------------------------------------------------------
// 4. With no retained history (K = 0) the reuse update path reduces bitwise
//    to the single-population update, for both families.
// ---------------------------------------------------------------------------

bool k0_bernoulli_case(Rng &seeder) {
  const int d = 2 + static_cast<int>(uniform01(seeder) * 18);
  const int lambda = 2 + static_cast<int>(uniform01(seeder) * 8);
  const double eta = 0.02 + 0.3 * uniform01(seeder);
  const double T = 0.05 + 0.4 * uniform01(seeder);
  const std::uint64_t seed = seeder();

  PbilOptimizer opt(d, lambda, 0, eta, T, /*maximize=*/true);
  Rng rng(seed), shadow(seed);
  const auto scheme = WeightScheme::step_threshold(T);
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd theta0 = opt.params().theta;
    opt.step(onemax_d, rng);

    BernoulliParams p0;
    p0.theta = theta0;
    const auto xs = bernoulli_sample(p0, lambda, shadow);
    std::vector<double> fvals;
    for (const auto &x : xs) fvals.push_back(onemax_d(x));
    const auto what = utility_hat_plain(rank_counts(fvals, /*minimize=*/false), scheme, lambda);
    const double denom = static_cast<double>(lambda);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < lambda; ++i) {
      const double coeff = what[static_cast<std::size_t>(i)] * 1.0 / denom;
      Eigen::VectorXd g(d);
      for (int j = 0; j < d; ++j)
        g[j] = static_cast<double>(xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) - theta0[j];
      acc += coeff * g;
    }
    Eigen::VectorXd expected = theta0 + eta * acc;
    const double lo = 1.0 / d, hi = 1.0 - 1.0 / d;
    for (int j = 0; j < d; ++j) expected[j] = std::min(hi, std::max(lo, expected[j]));
    for (int j = 0; j < d; ++j)
      if (opt.params().theta[j] != expected[j]) return false;
  }
  return true;
}

bool k0_gaussian_case(Rng &seeder, CmaVariant variant) {
  const int d = 2 + static_cast<int>(uniform01(seeder) * 4);
  const int lambda = 3 + static_cast<int>(uniform01(seeder) * 6);
  const std::uint64_t seed = seeder();

  CmaSettings s;
  s.d = d;
  s.lambda = lambda;
  s.K = 0;
  s.variant = variant;
  GaussianParams init;
  init.mean = Eigen::VectorXd::Constant(d, 1.0);
  init.cov = Eigen::MatrixXd::Identity(d, d);
  CmaOptimizer opt(s, init);
  const auto weights = cma_standard_weights(lambda);
  const auto scheme = WeightScheme::log_half();

  Rng rng(seed), shadow(seed);
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd m = opt.params().mean;
    const Eigen::MatrixXd C = opt.params().cov;
    opt.step([](const Eigen::VectorXd &x) { return x.squaredNorm(); }, rng);

    GaussianDensity dens(GaussianParams{m, C});
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < lambda; ++i) xs.push_back(dens.sample(shadow));
    std::vector<double> fvals;
    for (const auto &x : xs) fvals.push_back(x.squaredNorm());

    const auto what = utility_hat_plain(rank_counts(fvals, true), scheme, lambda);
    const double denom = static_cast<double>(lambda);

    Eigen::VectorXd mean_delta;
    if (variant == CmaVariant::ReuseAll) {
      mean_delta = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < lambda; ++i) {
        const double coeff = what[static_cast<std::size_t>(i)] * 1.0 / denom;
        mean_delta += coeff * (xs[static_cast<std::size_t>(i)] - m).eval();
      }
    } else {
      // selection-weighted step over the current population
      std::vector<std::size_t> order(xs.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
      std::vector<double> w_by_sample(xs.size());
      for (std::size_t rank = 0; rank < order.size(); ++rank) w_by_sample[order[rank]] = weights[rank];
      mean_delta = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < lambda; ++i)
        mean_delta += w_by_sample[static_cast<std::size_t>(i)] * (xs[static_cast<std::size_t>(i)] - m);
    }

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < lambda; ++i) {
      const double coeff = what[static_cast<std::size_t>(i)] * 1.0 / denom;
      const Eigen::VectorXd y = xs[static_cast<std::size_t>(i)] - m;
      rank_mu += coeff * (y * y.transpose() - C).eval();
    }
    Eigen::MatrixXd new_cov = C;
    new_cov += opt.rates().c_mu * rank_mu;
    Eigen::VectorXd new_mean = m + opt.rates().c_m * mean_delta;
    symmetrize(new_cov);

    if ((opt.params().mean - new_mean).cwiseAbs().maxCoeff() != 0.0) return false;
    if ((opt.params().cov - new_cov).cwiseAbs().maxCoeff() != 0.0) return false;
  }
  return true;
}

Criterion criterion_k0_reduction() {
  Criterion c{"K = 0 reuse updates reduce bitwise to the single-population updates"};
  Rng seeder(991);
  int done = 0;
  for (int rep = 0; rep < 34; ++rep) {
    if (!k0_bernoulli_case(seeder)) {
      c.detail = "binary-family mismatch in configuration " + std::to_string(rep);
      return c;
    }
    ++done;
  }
  for (int rep = 0; rep < 33; ++rep) {
    if (!k0_gaussian_case(seeder, CmaVariant::ReuseAll)) {
      c.detail = "mean+covariance reuse mismatch in configuration " + std::to_string(rep);
      return c;
    }
    ++done;
    if (!k0_gaussian_case(seeder, CmaVariant::ReuseCov)) {
      c.detail = "covariance-only reuse mismatch in configuration " + std::to_string(rep);
      return c;
    }
    ++done;
  }
  c.passed = true;
  c.detail = std::to_string(done) + " random configurations, 3 steps each, all bitwise";
  return c;
}

// ---------------------------------------------------------------------------
// 5. The closed-form natural gradients match inverse-Fisher-preconditioned
//    numerical gradients.
// ---------------------------------------------------------------------------

double bernoulli_logmass_ref(const Eigen::VectorXd &theta, const BitVector &x) {
  double acc = 0.0;
  for (int i = 0; i < theta.size(); ++i)
    acc += x[static_cast<std::size_t>(i)] ? std::log(theta[i]) : std::log(1.0 - theta[i]);
  return acc;
}

bool fisher_bernoulli_case(int d, Rng &rng, double *worst) {
  Eigen::VectorXd theta(d);
  for (int i = 0; i < d; ++i) theta[i] = 0.15 + 0.7 * uniform01(rng);
  BitVector x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = uniform01(rng) < 0.5 ? 1 : 0;

  const double eps = 1e-6;
  auto fd_grad = [&](const BitVector &y) {
    Eigen::VectorXd g(d);
    for (int a = 0; a < d; ++a) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[a] += eps;
      tm[a] -= eps;
      g[a] = (bernoulli_logmass_ref(tp, y) - bernoulli_logmass_ref(tm, y)) / (2.0 * eps);
    }
    return g;
  };

  // Fisher by full enumeration of the sample space
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
  for (unsigned idx = 0; idx < (1u << d); ++idx) {
    BitVector y(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = (idx >> i) & 1u;
    const double p = std::exp(bernoulli_logmass_ref(theta, y));
    const Eigen::VectorXd g = fd_grad(y);
    F += p * (g * g.transpose());
  }

  const Eigen::VectorXd natural = F.ldlt().solve(fd_grad(x));
  BernoulliParams params;
  params.theta = theta;
  const Eigen::VectorXd closed = bernoulli_nat_grad(params, x);
  const double rel = (natural - closed).norm() / closed.norm();
  *worst = std::max(*worst, rel);
  return rel < 1e-4;
}

// Gaussian parameters flattened as [mean; diagonal of C; strict lower
// triangle of C], with symmetric pair perturbations for off-diagonal entries.
struct GaussianParamVec {
  int d;
  int size() const { return d + d * (d + 1) / 2; }
  void apply(Eigen::VectorXd &m, Eigen::MatrixXd &C, int a, double eps) const {
    if (a < d) {
      m[a] += eps;
      return;
    }
    a -= d;
    if (a < d) {
      C(a, a) += eps;
      return;
    }
    a -= d;
    for (int i = 1, k = 0; i < d; ++i)
      for (int j = 0; j < i; ++j, ++k)
        if (k == a) {
          C(i, j) += eps;
          C(j, i) += eps;
          return;
        }
  }
};

double gaussian_logpdf_ref(const Eigen::VectorXd &m, const Eigen::MatrixXd &C,
                           const Eigen::VectorXd &x) {
  const int d = static_cast<int>(m.size());
  const Eigen::VectorXd y = x - m;
  return -0.5 * (d * std::log(2.0 * M_PI) + std::log(C.determinant()) + y.dot(C.inverse() * y));
}

bool fisher_gaussian_case(int d, Rng &rng, double *worst) {
  // moderately conditioned random covariance
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = standard_normal(rng);
  Eigen::MatrixXd C = A * A.transpose() / d + 0.7 * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd m(d);
  for (int i = 0; i < d; ++i) m[i] = 2.0 * (uniform01(rng) - 0.5);
  GaussianParams params{m, C};
  const Eigen::VectorXd x = m + Eigen::LLT<Eigen::MatrixXd>(C).matrixL() *
                                    [&] {
                                      Eigen::VectorXd z(d);
                                      for (int i = 0; i < d; ++i) z[i] = standard_normal(rng);
                                      return z;
                                    }();

  const GaussianParamVec pv{d};
  const int P = pv.size();

  auto logpdf_at = [&](int a, double ea, int b, double eb, const Eigen::VectorXd &y) {
    Eigen::VectorXd mm = m;
    Eigen::MatrixXd CC = C;
    pv.apply(mm, CC, a, ea);
    if (b >= 0) pv.apply(mm, CC, b, eb);
    return gaussian_logpdf_ref(mm, CC, y);
  };

  // gradient at the sampled point
  const double ge = 1e-6;
  Eigen::VectorXd grad(P);
  for (int a = 0; a < P; ++a)
    grad[a] = (logpdf_at(a, ge, -1, 0.0, x) - logpdf_at(a, -ge, -1, 0.0, x)) / (2.0 * ge);

  // Fisher as minus the expected Hessian; the expectation over x uses 2d
  // symmetric sigma points, which is exact because the Hessian entries are
  // quadratic polynomials in x
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(C).matrixL();
  std::vector<Eigen::VectorXd> sigma;
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXd dir = std::sqrt(static_cast<double>(d)) * L.col(i);
    sigma.push_back(m + dir);
    sigma.push_back(m - dir);
  }
  const double he = 1e-4;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(P, P);
  for (const auto &y : sigma) {
    Eigen::MatrixXd H(P, P);
    for (int a = 0; a < P; ++a)
      for (int b = a; b < P; ++b) {
        const double v = (logpdf_at(a, he, b, he, y) - logpdf_at(a, he, b, -he, y) -
                          logpdf_at(a, -he, b, he, y) + logpdf_at(a, -he, b, -he, y)) /
                         (4.0 * he * he);
        H(a, b) = v;
        H(b, a) = v;
      }
    F -= H / static_cast<double>(sigma.size());
  }

  const Eigen::VectorXd natural = F.ldlt().solve(grad);

  Eigen::VectorXd closed(P);
  closed.head(d) = gaussian_nat_grad_mean(params, x);
  const Eigen::MatrixXd G = gaussian_nat_grad_cov(params, x);
  for (int i = 0; i < d; ++i) closed[d + i] = G(i, i);
  for (int i = 1, k = 0; i < d; ++i)
    for (int j = 0; j < i; ++j, ++k) closed[2 * d + k] = G(i, j);

  const double rel = (natural - closed).norm() / closed.norm();
  *worst = std::max(*worst, rel);
  return rel < 1e-4;
}

Criterion criterion_natural_gradient() {
  Criterion c{"closed-form natural gradients match inverse-Fisher numerical gradients"};
  Rng rng(246);
  double worst_b = 0.0, worst_g = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 1 + rep % 3;
    if (!fisher_bernoulli_case(d, rng, &worst_b)) {
      c.detail = "binary family relative error " + fmt(worst_b) + " at pair " + std::to_string(rep);
      return c;
    }
  }
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 1 + rep % 3;
    if (!fisher_gaussian_case(d, rng, &worst_g)) {
      c.detail = "gaussian family relative error " + fmt(worst_g) + " at pair " + std::to_string(rep);
      return c;
    }
  }
  c.passed = true;
  c.detail = "worst relative error: binary " + fmt(worst_b) + ", gaussian " + fmt(worst_g);
  return c;
}

// ---------------------------------------------------------------------------
// 6. Monte-Carlo weak-preference quantiles match exhaustive enumeration.
// ---------------------------------------------------------------------------

Criterion criterion_quantile_oracle() {
  Criterion c{"Monte-Carlo quantile estimates match exhaustive enumeration within 3 SE"};
  const int d = 10, lambda = 100000, candidates = 20;
  Rng rng(777);
  BernoulliParams theta;
  theta.theta = Eigen::VectorXd(d);
  for (int i = 0; i < d; ++i) theta.theta[i] = 0.2 + 0.6 * uniform01(rng);

  // one shared Monte-Carlo population
  std::vector<double> fpool;
  fpool.reserve(lambda);
  for (int i = 0; i < lambda; ++i)
    fpool.push_back(static_cast<double>(eval_binary("onemax", bernoulli_sample(theta, rng))));

  // exact tail mass per objective level by enumerating the whole space
  std::vector<double> mass_ge(static_cast<std::size_t>(d + 1), 0.0);
  for (unsigned idx = 0; idx < (1u << d); ++idx) {
    BitVector y(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = (idx >> i) & 1u;
    const double p = std::exp(bernoulli_log_density(theta, y));
    mass_ge[static_cast<std::size_t>(eval_binary("onemax", y))] += p;
  }
  for (int lvl = d - 1; lvl >= 0; --lvl) mass_ge[static_cast<std::size_t>(lvl)] += mass_ge[static_cast<std::size_t>(lvl + 1)];

  double worst_z = 0.0;
  BernoulliParams half;
  half.theta = Eigen::VectorXd::Constant(d, 0.5);
  for (int rep = 0; rep < candidates; ++rep) {
    const BitVector cand = bernoulli_sample(half, rng);
    const double fc = static_cast<double>(eval_binary("onemax", cand));
    std::vector<double> fvals = fpool;
    fvals.push_back(fc);
    const auto counts = rank_counts(fvals, /*minimize=*/false);
    const double q_hat = static_cast<double>(counts.back().rk_le) / (lambda + 1);
    const double q_exact = mass_ge[static_cast<std::size_t>(static_cast<long long>(fc))];
    const double se = std::sqrt(std::max(q_exact * (1.0 - q_exact), 1e-12) / lambda);
    const double tol = 3.0 * se + 2.0 / lambda;  // small slack for self-inclusion
    worst_z = std::max(worst_z, std::abs(q_hat - q_exact) / (se + 1e-15));
    if (std::abs(q_hat - q_exact) >= tol) {
      c.detail = "candidate " + std::to_string(rep) + ": estimate " + fmt(q_hat) + " vs exact " +
                 fmt(q_exact);
      return c;
    }
  }
  c.passed = true;
  c.detail = std::to_string(candidates) + " candidates, worst deviation " + fmt(worst_z) + " SE";
  return c;
}

// ---------------------------------------------------------------------------
// 7. Retaining past populations lowers the evaluation count on OneMax.
// ---------------------------------------------------------------------------

// One-sided Mann-Whitney p-value (normal approximation, tie corrected) for
// the alternative "a tends to be smaller than b".
double mann_whitney_p_less(const std::vector<double> &a, const std::vector<double> &b) {
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  double U = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x < y) U += 1.0;
      else if (x == y) U += 0.5;
    }
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double n = n1 + n2;
  const double mu = n1 * n2 / 2.0;
  const double sigma2 = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (sigma2 <= 0.0) return 1.0;
  const double z = (U - mu - 0.5) / std::sqrt(sigma2);
  return 0.5 * std::erfc(z / std::sqrt(2.0));  // 1 - Phi(z)
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Criterion criterion_onemax_trend() {
  Criterion c{"retained populations reduce OneMax evaluations (50 trials, p < 0.05)"};
  ExperimentConfig base;
  base.function = "onemax";
  base.d = 128;
  base.variant = "pbil";
  base.lambda = 2;
  base.eta = 1.0 / 128;
  base.trials = 50;
  base.seed = 4000;

  std::vector<std::vector<double>> evals;
  std::ostringstream detail;
  for (int K : {0, 1, 3}) {
    ExperimentConfig cfg = base;
    cfg.K = K;
    const auto s = run_experiment(cfg, worker_threads());
    if (s.success_count != cfg.trials) {
      c.detail = "K=" + std::to_string(K) + ": only " + std::to_string(s.success_count) +
                 "/50 trials reached the optimum";
      return c;
    }
    std::vector<double> e;
    for (const auto &t : s.trials) e.push_back(static_cast<double>(t.evaluations));
    detail << "K=" << K << " median " << fmt(median(e)) << "; ";
    evals.push_back(std::move(e));
  }
  const double med0 = median(evals[0]), med1 = median(evals[1]);
  if (!(med1 < med0)) {
    c.detail = detail.str() + "median did not decrease from K=0 to K=1";
    return c;
  }
  const double p = mann_whitney_p_less(evals[1], evals[0]);
  detail << "one-sided p " << fmt(p);
  c.passed = p < 0.05;
  c.detail = detail.str();
  return c;
}

// ---------------------------------------------------------------------------
// 8. Retained populations reduce evaluations on Sphere and Ellipsoid by at
//    least 10% with full success.
// ---------------------------------------------------------------------------

Criterion criterion_continuous_trend() {
  Criterion c{"retained populations cut Sphere/Ellipsoid evaluations by >= 10% at full success"};
  std::ostringstream detail;
  for (const std::string fn : {"sphere", "ellipsoid"}) {
    double mean_by_k[2] = {0.0, 0.0};
    int slot = 0;
    for (int K : {0, 5}) {
      ExperimentConfig cfg;
      cfg.function = fn;
      cfg.d = 20;
      cfg.variant = "reuse-mc";
      cfg.lambda = 12;
      cfg.K = K;
      cfg.trials = 20;
      cfg.seed = 7000;
      const auto s = run_experiment(cfg, worker_threads());
      if (s.success_count != cfg.trials) {
        c.detail = fn + " K=" + std::to_string(K) + ": only " + std::to_string(s.success_count) +
                   "/20 trials reached the target";
        return c;
      }
      mean_by_k[slot++] = s.mean_evals_success;
    }
    detail << fn << ": mean evals " << fmt(mean_by_k[0]) << " -> " << fmt(mean_by_k[1]) << "; ";
    if (!(mean_by_k[1] <= 0.9 * mean_by_k[0])) {
      c.detail = detail.str() + "reduction below 10%";
      return c;
    }
  }
  c.passed = true;
  c.detail = detail.str();
  return c;
}

// ---------------------------------------------------------------------------
// 9. The rank-one-augmented baseline solves Cigar, and disabling its rank-one
//    term reproduces the rank-mu-only optimizer bitwise.
// ---------------------------------------------------------------------------

Criterion criterion_rank_one_baseline() {
  Criterion c{"rank-one baseline solves Cigar 20/20; zero rank-one rate equals rank-mu bitwise"};
  ExperimentConfig cfg;
  cfg.function = "cigar";
  cfg.d = 20;
  cfg.variant = "reuse-c-r1";
  cfg.lambda = default_lambda(20);
  cfg.K = 0;
  cfg.trials = 20;
  cfg.seed = 8200;
  const auto s = run_experiment(cfg, worker_threads());
  if (s.success_count != cfg.trials) {
    c.detail = "only " + std::to_string(s.success_count) + "/20 Cigar trials reached 1e-10";
    return c;
  }

  CmaSettings plain;
  plain.d = 6;
  plain.lambda = 8;
  plain.variant = CmaVariant::PureRankMu;
  CmaSettings hybrid = plain;
  hybrid.variant = CmaVariant::Hybrid;
  hybrid.c1_override = 0.0;
  GaussianParams init;
  init.mean = Eigen::VectorXd::Constant(6, 2.0);
  init.cov = Eigen::MatrixXd::Identity(6, 6);
  CmaOptimizer a(plain, init);
  CmaOptimizer b(hybrid, init);
  Rng ra(31337), rb(31337);
  auto sphere = [](const Eigen::VectorXd &x) { return x.squaredNorm(); };
  for (int it = 0; it < 50; ++it) {
    a.step(sphere, ra);
    b.step(sphere, rb);
    if ((a.params().mean - b.params().mean).cwiseAbs().maxCoeff() != 0.0 ||
        (a.params().cov - b.params().cov).cwiseAbs().maxCoeff() != 0.0) {
      c.detail = "bitwise divergence at step " + std::to_string(it);
      return c;
    }
  }
  c.passed = true;
  c.detail = "20/20 Cigar successes, mean evals " + fmt(s.mean_evals_success) +
             "; 50 steps bitwise identical with the rank-one term disabled";
  return c;
}

// ---------------------------------------------------------------------------
// 10. Population-recycling evaluation contract.
// ---------------------------------------------------------------------------

Criterion criterion_recycling_contract() {
  Criterion c{"population recycling: 0 evals at alpha=0 unchanged, lambda at alpha=1, exact accounting"};
  const int d = 10, lambda = default_lambda(10);
  auto sphere = [](const Eigen::VectorXd &x) { return x.squaredNorm(); };
  GaussianParams init;
  init.mean = Eigen::VectorXd::Constant(d, 2.0);
  init.cov = 4.0 * Eigen::MatrixXd::Identity(d, d);

  {
    CmaSettings s;
    s.d = d;
    s.lambda = lambda;
    s.variant = CmaVariant::ImportanceMixing;
    s.alpha = 0.0;
    CmaOptimizer opt(s, init);
    Rng rng(61);
    const GaussianParams before = opt.params();
    if (opt.step(sphere, rng).evaluations_consumed != lambda) {
      c.detail = "first step did not evaluate a full population";
      return c;
    }
    opt.set_params(before);
    const auto rep = opt.step(sphere, rng);
    if (rep.evaluations_consumed != 0) {
      c.detail = "alpha=0 with unchanged parameters consumed " +
                 std::to_string(rep.evaluations_consumed) + " evaluations";
      return c;
    }
  }
  {
    CmaSettings s;
    s.d = d;
    s.lambda = lambda;
    s.variant = CmaVariant::ImportanceMixing;
    s.alpha = 1.0;
    CmaOptimizer opt(s, init);
    Rng rng(61);
    for (int it = 0; it < 5; ++it) {
      if (opt.step(sphere, rng).evaluations_consumed != lambda) {
        c.detail = "alpha=1 step did not consume exactly lambda evaluations";
        return c;
      }
    }
  }

  // full-trial accounting: reported evaluations must equal objective calls
  CmaSettings s;
  s.d = d;
  s.lambda = lambda;
  s.variant = CmaVariant::ImportanceMixing;
  s.alpha = 0.1;
  CmaOptimizer opt(s, init);
  Rng rng(62);
  long long counted = 0, reported = 0, steps = 0;
  double best = std::numeric_limits<double>::infinity();
  auto counting = [&counted](const Eigen::VectorXd &x) {
    ++counted;
    return x.squaredNorm();
  };
  while (reported < 1000000 && best > 1e-10) {
    const auto rep = opt.step(counting, rng);
    reported += rep.evaluations_consumed;
    best = std::min(best, rep.best_f_in_step);
    ++steps;
    if (reported != counted) {
      c.detail = "accounting mismatch after " + std::to_string(steps) + " steps: reported " +
                 std::to_string(reported) + ", counted " + std::to_string(counted);
      return c;
    }
  }
  c.passed = best <= 1e-10 && reported == counted;
  c.detail = "trial finished at best " + fmt(best) + " after " + std::to_string(steps) +
             " steps, " + std::to_string(reported) + " evaluations, accounting exact";
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion (*)()> checks = {
      criterion_two_sample_equivalence, criterion_weight_sum_identities,
      criterion_mixture_estimator_variance, criterion_k0_reduction,
      criterion_natural_gradient, criterion_quantile_oracle,
      criterion_onemax_trend, criterion_continuous_trend,
      criterion_rank_one_baseline, criterion_recycling_contract,
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Criterion c = checks[i]();
    std::printf("[%s] %zu. %s — %s\n", c.passed ? "PASS" : "FAIL", i + 1, c.name.c_str(),
                c.detail.c_str());
    std::fflush(stdout);
    if (!c.passed) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance checks passed\n", checks.size());
  } else {
    std::printf("%d acceptance check(s) failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
