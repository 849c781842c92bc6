#ifndef IGOPT_REUSE_HPP
#define IGOPT_REUSE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "igopt/utility.hpp"

namespace igopt {

// Rolling window of the last K+1 generations together with the cached
// log-likelihood table L[k][l][i] = ln p_{theta(t-k)}(x_i^(t-l)). The table
// costs O(lambda K^2) memory and lets the mixture likelihood ratios be
// evaluated without touching the stored parameter snapshots again.
template <class Sample>
class ReuseArchive {
 public:
  using LogPdf = std::function<double(const Sample &)>;

  struct Generation {
    LogPdf logpdf;
    std::vector<Sample> samples;
    std::vector<double> fvals;
  };

  explicit ReuseArchive(int max_past, int lambda) : K_(max_past), lambda_(lambda) {
    if (max_past < 0) throw std::invalid_argument("ReuseArchive: K must be >= 0");
    if (lambda < 1) throw std::invalid_argument("ReuseArchive: lambda must be >= 1");
  }

  int lambda() const { return lambda_; }
  int k_eff() const { return static_cast<int>(gens_.size()) - 1; }
  bool empty() const { return gens_.empty(); }
  const Generation &generation(int k) const { return gens_[static_cast<std::size_t>(k)]; }

  // L[k][l][i]: density of sample i of generation l under the params of
  // generation k (0 = newest).
  double loglik(int k, int l, int i) const {
    return loglik_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
  }

  void push(LogPdf logpdf, std::vector<Sample> samples, std::vector<double> fvals) {
    if (static_cast<int>(samples.size()) != lambda_ || fvals.size() != samples.size())
      throw std::invalid_argument("ReuseArchive::push: expected exactly lambda samples");
    if (static_cast<int>(gens_.size()) == K_ + 1) {
      gens_.pop_back();
      loglik_.pop_back();
      for (auto &row : loglik_) row.pop_back();
    }
    gens_.push_front(Generation{std::move(logpdf), std::move(samples), std::move(fvals)});
    // Column: new samples under the retained (older) params.
    for (std::size_t k = 0; k < loglik_.size(); ++k)
      loglik_[k].push_front(evaluate(gens_[k + 1].logpdf, gens_.front().samples));
    // Row: all retained samples under the new params.
    std::deque<std::vector<double>> row;
    for (const auto &g : gens_) row.push_back(evaluate(gens_.front().logpdf, g.samples));
    loglik_.push_front(std::move(row));
  }

  // rho[k][i] = p_t(x_i^(t-k)) / pbar(x_i^(t-k))
  //           = (K_eff+1) / sum_l exp(L[l][k][i] - L[0][k][i]),
  // evaluated with a max-shift so separated distributions cannot overflow.
  std::vector<std::vector<double>> likelihood_ratios() const {
    if (empty()) throw std::logic_error("likelihood_ratios: empty archive");
    const int kk = k_eff();
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(kk + 1));
    for (int k = 0; k <= kk; ++k) {
      auto &out = rho[static_cast<std::size_t>(k)];
      out.resize(static_cast<std::size_t>(lambda_));
      for (int i = 0; i < lambda_; ++i) {
        const double ref = loglik(0, k, i);
        double shift = 0.0;
        for (int l = 0; l <= kk; ++l) shift = std::max(shift, loglik(l, k, i) - ref);
        double denom = 0.0;
        for (int l = 0; l <= kk; ++l) denom += std::exp(loglik(l, k, i) - ref - shift);
        out[static_cast<std::size_t>(i)] = (kk + 1) * std::exp(-shift) / denom;
      }
    }
    return rho;
  }

  // Pooled objective values / ratios in archive order (k outer, i inner).
  std::vector<double> pooled_fvals() const {
    std::vector<double> f;
    for (const auto &g : gens_) f.insert(f.end(), g.fvals.begin(), g.fvals.end());
    return f;
  }

 private:
  static std::vector<double> evaluate(const LogPdf &pdf, const std::vector<Sample> &xs) {
    std::vector<double> v;
    v.reserve(xs.size());
    for (const auto &x : xs) v.push_back(pdf(x));
    return v;
  }

  int K_;
  int lambda_;
  std::deque<Generation> gens_;                      // newest first
  std::deque<std::deque<std::vector<double>>> loglik_;  // [param gen][sample gen][i]
};

// r[k][i] = hat-w(x_i^(t-k)) * rho[k][i], the coefficient of the reuse
// natural-gradient estimator.
template <class Sample>
std::vector<std::vector<double>> rhat(const ReuseArchive<Sample> &archive,
                                      const WeightScheme &scheme, bool minimize = true) {
  const auto rho = archive.likelihood_ratios();
  const int kk = archive.k_eff();
  const int lambda = archive.lambda();
  std::vector<double> flat_rho;
  flat_rho.reserve(static_cast<std::size_t>((kk + 1) * lambda));
  for (const auto &row : rho) flat_rho.insert(flat_rho.end(), row.begin(), row.end());
  const auto q = is_quantiles(archive.pooled_fvals(), flat_rho,
                              static_cast<double>(lambda) * (kk + 1), minimize);
  std::vector<std::vector<double>> r(static_cast<std::size_t>(kk + 1),
                                     std::vector<double>(static_cast<std::size_t>(lambda)));
  for (int k = 0; k <= kk; ++k)
    for (int i = 0; i < lambda; ++i) {
      const std::size_t flat = static_cast<std::size_t>(k * lambda + i);
      // A vanishing ratio contributes nothing, and its quantile interval can
      // collapse to zero width in floating point (group mass below the
      // cumulative sum's resolution), so skip the interval average then.
      r[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          q[flat].q_le > q[flat].q_lt ? utility_hat_is(q[flat], scheme) * flat_rho[flat] : 0.0;
    }
  return r;
}

// (1 / (lambda (K_eff+1))) sum_k sum_i r[k][i] grad(x_i^(t-k)). Grad returns
// a vector or matrix; the accumulation order is fixed (k outer, i inner).
template <class Sample, class GradFn>
auto nat_grad_estimate(const ReuseArchive<Sample> &archive,
                       const std::vector<std::vector<double>> &r, GradFn &&grad) {
  const int kk = archive.k_eff();
  const int lambda = archive.lambda();
  const double denom = static_cast<double>(lambda) * (kk + 1);
  using Out = decltype(grad(archive.generation(0).samples[0]));
  Out acc = Out::Zero(grad(archive.generation(0).samples[0]).rows(),
                      grad(archive.generation(0).samples[0]).cols());
  for (int k = 0; k <= kk; ++k)
    for (int i = 0; i < lambda; ++i) {
      const double coeff = r[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] / denom;
      acc += coeff * grad(archive.generation(k).samples[static_cast<std::size_t>(i)]);
    }
  return acc;
}

// Both sides of the telescoping identity: sum r / (lambda (K_eff+1)) on the
// left, W(largest pooled q_le) - W(0) on the right.
template <class Sample>
std::pair<double, double> weight_sum_identity(const ReuseArchive<Sample> &archive,
                                              const std::vector<std::vector<double>> &r,
                                              const WeightScheme &scheme, bool minimize = true) {
  const int kk = archive.k_eff();
  const double denom = static_cast<double>(archive.lambda()) * (kk + 1);
  double lhs = 0.0;
  for (const auto &row : r)
    for (double v : row) lhs += v / denom;
  const auto rho = archive.likelihood_ratios();
  std::vector<double> flat_rho;
  for (const auto &row : rho) flat_rho.insert(flat_rho.end(), row.begin(), row.end());
  const auto q = is_quantiles(archive.pooled_fvals(), flat_rho, denom, minimize);
  double q_max = 0.0;
  for (const auto &qi : q) q_max = std::max(q_max, qi.q_le);
  return {lhs, scheme.W(q_max) - scheme.W(0.0)};
}

}  // namespace igopt

#endif
