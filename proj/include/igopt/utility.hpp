#ifndef IGOPT_UTILITY_HPP
#define IGOPT_UTILITY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace igopt {

// Weight function w paired with its integral W(s) = int_0^s w, evaluated on
// [0, inf). Importance-sampled quantile estimates can exceed 1, so both
// integrals are extended past s = 1 by their last analytic branch.
class WeightScheme {
 public:
  enum class Kind { StepThreshold, LogHalf };

  static WeightScheme step_threshold(double T);
  static WeightScheme log_half();

  double W(double s) const;
  Kind kind() const { return kind_; }
  double threshold() const { return T_; }

 private:
  WeightScheme(Kind kind, double T) : kind_(kind), T_(T) {}
  Kind kind_;
  double T_;
};

// W for the +/-1/(2T) step weight; zero mass overall, plateau at 1/2.
double W_step(double s, double T);

// W for w(s) = -2 ln(2s) 1{s <= 1/2}; flat at 1 beyond 1/2.
double W_log(double s);

struct RankCounts {
  int rk_le;  // # of weakly better samples, in [1, lambda]
  int rk_lt;  // # of strictly better samples, in [0, rk_le)
};

// Importance-sampled quantile estimates per candidate. q_lt < q_le strictly
// (the candidate's own positive ratio term separates them); not bounded by 1.
struct IsQuantiles {
  double q_le;
  double q_lt;
};

// Ties are detected by exact floating-point equality. minimize=false ranks
// larger values as better.
std::vector<RankCounts> rank_counts(const std::vector<double> &fvals, bool minimize = true);

// hat-w_i = [W(rk_le/lambda) - W(rk_lt/lambda)] / [(rk_le - rk_lt)/lambda].
std::vector<double> utility_hat_plain(const std::vector<RankCounts> &counts,
                                      const WeightScheme &scheme, int lambda);

// Mixture-weighted quantiles over pooled samples: q_le(x) =
// sum_j 1{f_j <= f(x)} rho_j / denom, q_lt with strict inequality.
// Plain ranking is the special case rho == 1, denom = lambda.
std::vector<IsQuantiles> is_quantiles(const std::vector<double> &fvals,
                                      const std::vector<double> &ratios, double denom,
                                      bool minimize = true);

double utility_hat_is(const IsQuantiles &q, const WeightScheme &scheme);

// CMA selection weights by rank, normalized to sum 1.
std::vector<double> cma_standard_weights(int lambda);

// Effective variance selection mass, 1 / sum(w_i^2) for weights summing to 1.
double mueff(const std::vector<double> &weights);

}  // namespace igopt

#endif
