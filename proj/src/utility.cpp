#include "igopt/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace igopt {

WeightScheme WeightScheme::step_threshold(double T) {
  if (!(T > 0.0 && T < 0.5)) throw std::invalid_argument("step threshold T must be in (0, 1/2)");
  return WeightScheme(Kind::StepThreshold, T);
}

WeightScheme WeightScheme::log_half() { return WeightScheme(Kind::LogHalf, 0.0); }

double WeightScheme::W(double s) const {
  return kind_ == Kind::StepThreshold ? W_step(s, T_) : W_log(s);
}

double W_step(double s, double T) {
  if (s <= T) return s / (2.0 * T);
  if (s <= 1.0 - T) return 0.5;
  return (1.0 - s) / (2.0 * T);
}

double W_log(double s) {
  if (s <= 0.0) return 0.0;
  if (s > 0.5) return 1.0;
  return 2.0 * s - 2.0 * s * std::log(2.0 * s);
}

namespace {

// Indices sorted so that better objective values come first.
std::vector<std::size_t> better_first_order(const std::vector<double> &fvals, bool minimize) {
  for (double f : fvals)
    if (std::isnan(f)) throw std::invalid_argument("NaN objective value");
  std::vector<std::size_t> order(fvals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return minimize ? fvals[a] < fvals[b] : fvals[a] > fvals[b];
  });
  return order;
}

}  // namespace

std::vector<RankCounts> rank_counts(const std::vector<double> &fvals, bool minimize) {
  const auto order = better_first_order(fvals, minimize);
  const std::size_t n = fvals.size();
  std::vector<RankCounts> counts(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos + 1;
    while (end < n && fvals[order[end]] == fvals[order[pos]]) ++end;
    for (std::size_t k = pos; k < end; ++k)
      counts[order[k]] = RankCounts{static_cast<int>(end), static_cast<int>(pos)};
    pos = end;
  }
  return counts;
}

std::vector<IsQuantiles> is_quantiles(const std::vector<double> &fvals,
                                      const std::vector<double> &ratios, double denom,
                                      bool minimize) {
  if (fvals.size() != ratios.size()) throw std::invalid_argument("is_quantiles: size mismatch");
  const auto order = better_first_order(fvals, minimize);
  const std::size_t n = fvals.size();
  std::vector<IsQuantiles> q(n);
  double cum = 0.0;
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos + 1;
    double group = ratios[order[pos]];
    while (end < n && fvals[order[end]] == fvals[order[pos]]) {
      group += ratios[order[end]];
      ++end;
    }
    const double q_lt = cum / denom;
    cum += group;
    const double q_le = cum / denom;
    for (std::size_t k = pos; k < end; ++k) q[order[k]] = IsQuantiles{q_le, q_lt};
    pos = end;
  }
  return q;
}

double utility_hat_is(const IsQuantiles &q, const WeightScheme &scheme) {
  if (!(q.q_le > q.q_lt)) throw std::invalid_argument("utility_hat_is: q_le must exceed q_lt");
  return (scheme.W(q.q_le) - scheme.W(q.q_lt)) / (q.q_le - q.q_lt);
}

std::vector<double> utility_hat_plain(const std::vector<RankCounts> &counts,
                                      const WeightScheme &scheme, int lambda) {
  // Shares the importance-sampled path with all ratios equal to one, which
  // makes the K = 0 reduction hold by construction.
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const IsQuantiles q{static_cast<double>(counts[i].rk_le) / lambda,
                        static_cast<double>(counts[i].rk_lt) / lambda};
    w[i] = utility_hat_is(q, scheme);
  }
  return w;
}

std::vector<double> cma_standard_weights(int lambda) {
  if (lambda < 2) throw std::invalid_argument("cma_standard_weights: lambda must be >= 2");
  std::vector<double> w(static_cast<std::size_t>(lambda));
  const double base = std::log((lambda + 1.0) / 2.0);
  double sum = 0.0;
  for (int i = 0; i < lambda; ++i) {
    w[static_cast<std::size_t>(i)] = std::max(0.0, base - std::log(i + 1.0));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double &v : w) v /= sum;
  return w;
}

double mueff(const std::vector<double> &weights) {
  double ss = 0.0;
  for (double w : weights) ss += w * w;
  if (ss == 0.0) throw std::invalid_argument("mueff: all weights are zero");
  return 1.0 / ss;
}

}  // namespace igopt
