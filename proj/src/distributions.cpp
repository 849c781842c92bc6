#include "igopt/distributions.hpp"

#include <cmath>

namespace igopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dims(int a, int b, const char *what) {
  if (a != b) throw dimension_error(std::string(what) + ": dimension mismatch");
}
}  // namespace

BitVector bernoulli_sample(const BernoulliParams &params, Rng &rng) {
  const int d = params.dim();
  BitVector x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = uniform01(rng) < params.theta[i] ? 1 : 0;
  return x;
}

std::vector<BitVector> bernoulli_sample(const BernoulliParams &params, int count, Rng &rng) {
  std::vector<BitVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(bernoulli_sample(params, rng));
  return out;
}

double bernoulli_log_density(const BernoulliParams &params, const BitVector &x) {
  check_dims(params.dim(), static_cast<int>(x.size()), "bernoulli_log_density");
  double acc = 0.0;
  for (int i = 0; i < params.dim(); ++i) {
    const double th = params.theta[i];
    acc += x[static_cast<std::size_t>(i)] ? std::log(th) : std::log1p(-th);
  }
  return acc;
}

Eigen::VectorXd bernoulli_nat_grad(const BernoulliParams &params, const BitVector &x) {
  check_dims(params.dim(), static_cast<int>(x.size()), "bernoulli_nat_grad");
  Eigen::VectorXd g(params.dim());
  for (int i = 0; i < params.dim(); ++i) g[i] = static_cast<double>(x[static_cast<std::size_t>(i)]) - params.theta[i];
  return g;
}

void clamp_bernoulli(BernoulliParams &params, int d) {
  check_dims(params.dim(), d, "clamp_bernoulli");
  const double lo = 1.0 / d;
  const double hi = 1.0 - 1.0 / d;
  for (int i = 0; i < d; ++i) params.theta[i] = std::min(hi, std::max(lo, params.theta[i]));
}

GaussianDensity::GaussianDensity(const GaussianParams &params) : params_(params) {
  Eigen::LLT<Eigen::MatrixXd> llt(params_.cov);
  if (llt.info() != Eigen::Success) throw covariance_error("covariance matrix is not positive definite");
  chol_ = llt.matrixL();
  log_det_ = 0.0;
  for (int i = 0; i < chol_.rows(); ++i) log_det_ += 2.0 * std::log(chol_(i, i));
}

double GaussianDensity::log_density(const Eigen::VectorXd &x) const {
  const int d = params_.dim();
  if (x.size() != d) throw dimension_error("gaussian_log_density: dimension mismatch");
  const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(x - params_.mean);
  return -0.5 * (d * std::log(kTwoPi) + log_det_ + z.squaredNorm());
}

Eigen::VectorXd GaussianDensity::sample(Rng &rng) const {
  const int d = params_.dim();
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = standard_normal(rng);
  return params_.mean + chol_ * z;
}

std::vector<Eigen::VectorXd> gaussian_sample(const GaussianParams &params, int count, Rng &rng) {
  GaussianDensity dist(params);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(dist.sample(rng));
  return out;
}

double gaussian_log_density(const GaussianParams &params, const Eigen::VectorXd &x) {
  return GaussianDensity(params).log_density(x);
}

Eigen::VectorXd gaussian_nat_grad_mean(const GaussianParams &params, const Eigen::VectorXd &x) {
  if (x.size() != params.dim()) throw dimension_error("gaussian_nat_grad_mean: dimension mismatch");
  return x - params.mean;
}

Eigen::MatrixXd gaussian_nat_grad_cov(const GaussianParams &params, const Eigen::VectorXd &x) {
  if (x.size() != params.dim()) throw dimension_error("gaussian_nat_grad_cov: dimension mismatch");
  const Eigen::VectorXd y = x - params.mean;
  // y y^T is symmetric by construction; C is kept symmetric by the updates.
  return y * y.transpose() - params.cov;
}

void symmetrize(Eigen::MatrixXd &C) {
  C = ((C + C.transpose()) * 0.5).eval();
}

double min_eigenvalue(const Eigen::MatrixXd &C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace igopt
