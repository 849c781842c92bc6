#ifndef IGOPT_MIXTURE_ESTIMATORS_HPP
#define IGOPT_MIXTURE_ESTIMATORS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace igopt {

// Validation-only estimators for the mixture importance-sampling variance
// comparison. These do not sit on the optimizer hot path; the optimizers go
// through ReuseArchive.
//
// One proposal distribution with its drawn samples, target/proposal densities
// evaluated at those samples, and its mixing coefficient.
struct ProposalBatch {
  std::vector<double> g_values;        // g(x_i)
  std::vector<double> target_density;  // p_t(x_i)
  // proposal_density[j][i]: density of this batch's sample i under proposal j
  // (all proposals, needed by the mixture denominator of IS2).
  std::vector<std::vector<double>> proposal_density;
  int own_index = 0;  // which proposal drew this batch
  double c = 0.0;     // mixing coefficient, sum over batches = 1
};

// IS1: per-proposal ratios, sum_j (c_j / n_j) sum_i g p_t / p_j.
inline double estimator_is1(const std::vector<ProposalBatch> &batches) {
  double acc = 0.0;
  for (const auto &b : batches) {
    const std::size_t n = b.g_values.size();
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pj = b.proposal_density[static_cast<std::size_t>(b.own_index)][i];
      if (pj <= 0.0) throw std::domain_error("estimator_is1: zero proposal density at a sample");
      inner += b.g_values[i] * b.target_density[i] / pj;
    }
    acc += b.c * inner / static_cast<double>(n);
  }
  return acc;
}

// IS2: mixture denominator, sum_j (1 / n_j) sum_i g c_j p_t / sum_k c_k p_k.
inline double estimator_is2(const std::vector<ProposalBatch> &batches) {
  double acc = 0.0;
  for (const auto &b : batches) {
    const std::size_t n = b.g_values.size();
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mix = 0.0;
      for (std::size_t j = 0; j < batches.size(); ++j)
        mix += batches[j].c * b.proposal_density[j][i];
      if (mix <= 0.0) throw std::domain_error("estimator_is2: zero mixture density at a sample");
      inner += b.g_values[i] * b.c * b.target_density[i] / mix;
    }
    acc += inner / static_cast<double>(n);
  }
  return acc;
}

}  // namespace igopt

#endif
