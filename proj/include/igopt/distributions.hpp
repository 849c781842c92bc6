#ifndef IGOPT_DISTRIBUTIONS_HPP
#define IGOPT_DISTRIBUTIONS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "igopt/rng.hpp"

namespace igopt {

using BitVector = std::vector<std::uint8_t>;

struct covariance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bernoulli family on bit strings; every theta_i must stay strictly in (0,1).
struct BernoulliParams {
  Eigen::VectorXd theta;

  int dim() const { return static_cast<int>(theta.size()); }
};

/// Multivariate Gaussian N(mean, cov); cov symmetric positive definite.
struct GaussianParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

BitVector bernoulli_sample(const BernoulliParams &params, Rng &rng);
std::vector<BitVector> bernoulli_sample(const BernoulliParams &params, int count, Rng &rng);

double bernoulli_log_density(const BernoulliParams &params, const BitVector &x);

// Natural gradient of ln p_theta(x): x - theta.
Eigen::VectorXd bernoulli_nat_grad(const BernoulliParams &params, const BitVector &x);

// Projects every component onto [1/d, 1 - 1/d].
void clamp_bernoulli(BernoulliParams &params, int d);

// Shared Cholesky factor for sampling and log-density under one parameter set.
class GaussianDensity {
 public:
  explicit GaussianDensity(const GaussianParams &params);

  double log_density(const Eigen::VectorXd &x) const;
  Eigen::VectorXd sample(Rng &rng) const;
  const GaussianParams &params() const { return params_; }

 private:
  GaussianParams params_;
  Eigen::MatrixXd chol_;  // lower factor
  double log_det_;
};

std::vector<Eigen::VectorXd> gaussian_sample(const GaussianParams &params, int count, Rng &rng);
double gaussian_log_density(const GaussianParams &params, const Eigen::VectorXd &x);

// Natural gradients of the Gaussian log-likelihood.
Eigen::VectorXd gaussian_nat_grad_mean(const GaussianParams &params, const Eigen::VectorXd &x);
Eigen::MatrixXd gaussian_nat_grad_cov(const GaussianParams &params, const Eigen::VectorXd &x);

void symmetrize(Eigen::MatrixXd &C);

double min_eigenvalue(const Eigen::MatrixXd &C);

}  // namespace igopt

#endif
