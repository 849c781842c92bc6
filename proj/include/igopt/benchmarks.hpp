#ifndef IGOPT_BENCHMARKS_HPP
#define IGOPT_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "igopt/distributions.hpp"

namespace igopt {

enum class DomainKind { Binary, Continuous };

struct BenchmarkSpec {
  std::string name;
  DomainKind domain;
  int d;
  double optimum;            // d for binary, 0 for continuous
  double init_lo, init_hi;   // continuous init range; sigma = (hi - lo) / 2
  double eigen_floor;        // covariance degeneracy cutoff
  long long budget;          // evaluation budget
  double target;             // continuous success threshold on best f
};

bool is_binary_function(const std::string &name);
bool is_known_function(const std::string &name);
std::vector<std::string> known_function_names();

long long eval_binary(const std::string &name, const BitVector &x);
double eval_continuous(const std::string &name, const Eigen::VectorXd &x);

BenchmarkSpec default_spec(const std::string &name, int d);

}  // namespace igopt

#endif
